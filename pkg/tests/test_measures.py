import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohloss import linalg
from cohloss.measures import (
    MeasureKind,
    abs_sum,
    block_additivity_check,
    c_l1,
    c_relent,
    coherence,
    dephase,
    direct_sum,
    entropy,
)
from cohloss.states import (
    DensityMatrix,
    counterexample_state,
    maximally_coherent,
    maximally_mixed,
    random_density,
    random_incoherent,
)

seeds = st.integers(min_value=0, max_value=2**64 - 1)
MEASURES = [MeasureKind.L1, MeasureKind.RELATIVE_ENTROPY]


def test_parse_measure_names():
    assert MeasureKind.parse("l1") is MeasureKind.L1
    assert MeasureKind.parse("relent") is MeasureKind.RELATIVE_ENTROPY
    assert MeasureKind.parse(MeasureKind.ABS_SUM) is MeasureKind.ABS_SUM
    with pytest.raises(ValueError):
        MeasureKind.parse("robustness")


def test_counterexample_values():
    rho = counterexample_state()
    assert c_l1(rho) == 1.0
    assert abs_sum(rho) == 2.0
    # dephased state is I/4 (2 bits), rho has spectrum {1/2, 1/2} (1 bit)
    assert c_relent(rho) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 8])
def test_maximally_coherent_values(d):
    rho = maximally_coherent(d, 1)
    assert c_l1(rho) == pytest.approx(d - 1, abs=1e-12)
    assert c_relent(rho) == pytest.approx(math.log2(d), abs=1e-10)


@pytest.mark.parametrize("kind", list(MeasureKind))
def test_incoherent_states_have_no_coherence(kind):
    expected = 1.0 if kind is MeasureKind.ABS_SUM else 0.0
    assert coherence(maximally_mixed(3, 2), kind) == pytest.approx(expected, abs=1e-12)
    assert coherence(random_incoherent(5, 3), kind) == pytest.approx(expected, abs=1e-12)


def test_entropy_floor_and_units():
    assert entropy([0.5, 0.5]) == pytest.approx(1.0)
    assert entropy([1.0, 0.0, -1e-17]) == 0.0


def test_dephase_keeps_diagonal():
    rho = random_density(4, 2, 1)
    d = dephase(rho).mat
    np.testing.assert_array_equal(np.diag(d), np.diag(rho.mat))
    assert np.count_nonzero(d - np.diag(np.diag(d))) == 0


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 6))
def test_measure_ranges_and_abs_sum_identity(seed, dim):
    rho = random_density(dim, dim, seed)
    l1 = c_l1(rho)
    assert -1e-12 <= l1 <= dim - 1 + 1e-9
    assert -1e-12 <= c_relent(rho) <= math.log2(dim) + 1e-9
    assert abs_sum(rho) == pytest.approx(1.0 + l1, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(2, 4), st.sampled_from(MEASURES))
def test_convexity(seed, dim, kind):
    rng = linalg.make_rng(seed)
    a, b = random_density(dim, dim, rng), random_density(dim, 1, rng)
    p = float(rng.uniform())
    mix = DensityMatrix(p * a.mat + (1 - p) * b.mat, dim)
    assert coherence(mix, kind) <= p * coherence(a, kind) + (1 - p) * coherence(b, kind) + 1e-9


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 4), st.sampled_from(MEASURES))
def test_appending_incoherent_ancilla_is_free(seed, dim, d_anc, kind):
    rng = linalg.make_rng(seed)
    rho = random_density(dim, dim, rng)
    sigma = random_incoherent(d_anc, rng)
    joint = DensityMatrix(linalg.tensor(rho.mat, sigma.mat), dim, d_anc)
    assert abs(coherence(joint, kind) - coherence(rho, kind)) < 1e-8


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 4), st.sampled_from(MEASURES))
def test_block_additivity(seed, n_blocks, kind):
    rng = linalg.make_rng(seed)
    blocks = [random_density(int(rng.integers(1, 4)), 1, rng) for _ in range(n_blocks)]
    probs = rng.dirichlet(np.ones(n_blocks))
    assert block_additivity_check(probs, blocks, kind) < 1e-8


def test_direct_sum_layout():
    out = direct_sum([0.25, 0.75], [maximally_mixed(2), counterexample_state()]).mat
    assert out.shape == (6, 6)
    np.testing.assert_array_equal(out[:2, :2], np.eye(2) / 8)
    assert np.count_nonzero(out[:2, 2:]) == 0
    with pytest.raises(ValueError):
        block_additivity_check([0.5, 0.6], [maximally_mixed(2)] * 2, "l1")


def test_relent_matches_independent_oracle():
    # S(diag) - S(rho) with LAPACK eigenvalues and natural logs converted by hand
    rho = random_density(5, 3, 17)

    def s(vals):
        vals = vals[vals > 1e-12]
        return -float(np.sum(vals * np.log(vals))) / math.log(2)

    expected = s(np.real(np.diag(rho.mat))) - s(np.linalg.eigvalsh(rho.mat))
    assert c_relent(rho) == pytest.approx(expected, abs=1e-10)
