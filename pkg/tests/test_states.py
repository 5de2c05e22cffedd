import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohloss import linalg
from cohloss.errors import DimensionError, InvalidStateError
from cohloss.measurement import computational_basis, project_local
from cohloss.states import (
    DensityMatrix,
    Ensemble,
    counterexample_ensemble,
    counterexample_state,
    is_valid,
    maximally_coherent,
    maximally_mixed,
    parse_dims,
    preset,
    qi_state,
    random_density,
    random_qi,
    validate,
)

seeds = st.integers(min_value=0, max_value=2**64 - 1)
PLUS = np.full((2, 2), 0.5)
MINUS = np.array([[0.5, -0.5], [-0.5, 0.5]])


def test_validate_accepts_maximally_mixed():
    rho = validate(np.eye(4) / 4, 2, 2)
    assert rho.dims == (2, 2)


def test_validate_rejects_wrong_trace_with_residual():
    with pytest.raises(InvalidStateError) as info:
        validate(2 * PLUS, 2, 1)
    assert info.value.invariant == "trace"
    assert info.value.residual == pytest.approx(1.0)


def test_validate_rejects_non_hermitian():
    with pytest.raises(InvalidStateError) as info:
        validate(np.array([[0.5, 0.3], [0.0, 0.5]]), 2)
    assert info.value.invariant == "hermitian"
    assert info.value.residual == pytest.approx(0.3)


def test_validate_rejects_negative_eigenvalue():
    with pytest.raises(InvalidStateError) as info:
        validate(np.array([[0.5, 0.8], [0.8, 0.5]]), 2)
    assert info.value.invariant == "positive"
    assert info.value.residual == pytest.approx(0.3)


def test_validate_tolerates_tiny_negative_eigenvalue():
    # just inside the -1e-9 floor
    m = np.diag([1 + 5e-10, -5e-10])
    assert is_valid(m, 2)
    assert not is_valid(np.diag([1 + 5e-9, -5e-9]), 2)


def test_validate_dimension_mismatch():
    with pytest.raises(DimensionError):
        validate(np.eye(4) / 4, 2, 3)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 6))
def test_validate_accepts_normalized_gram(seed, dim):
    g = linalg.random_ginibre(dim, seed)
    m = g @ g.conj().T
    rho = validate(m / np.trace(m), dim)
    # eigensolver oracle: PSD by construction
    assert np.linalg.eigvalsh(rho.mat).min() > -1e-12


def test_density_matrix_is_immutable():
    rho = maximally_mixed(2, 2)
    with pytest.raises(ValueError):
        rho.mat[0, 0] = 1.0
    with pytest.raises(AttributeError):
        rho.dA = 4


def test_counterexample_entries():
    m = counterexample_state().mat
    expected = np.zeros((4, 4))
    for r, c in [(0, 0), (0, 2), (2, 0), (2, 2), (1, 1), (3, 3)]:
        expected[r, c] = 0.25
    expected[1, 3] = expected[3, 1] = -0.25
    assert np.array_equal(m, expected)
    assert np.trace(m) == 1.0
    assert m[1, 3] == -0.25


def test_counterexample_marginal_is_maximally_mixed():
    np.testing.assert_array_equal(counterexample_state().reduced("A").mat, np.eye(2) / 2)


def test_counterexample_is_a_qi_state():
    e = Ensemble(probs=(0.5, 0.5), members=(DensityMatrix(PLUS, 2), DensityMatrix(MINUS, 2)), labels=(0, 1))
    assert np.array_equal(qi_state(e, 2).mat, counterexample_state().mat)
    assert np.array_equal(qi_state(counterexample_ensemble(), 2).mat, counterexample_state().mat)


def test_qi_state_single_member():
    e = Ensemble(probs=(1.0,), members=(DensityMatrix(PLUS, 2),), labels=(0,))
    np.testing.assert_array_equal(qi_state(e, 2).mat, np.kron(PLUS, np.diag([1.0, 0.0])))


def test_qi_state_label_out_of_range():
    e = Ensemble(probs=(1.0,), members=(DensityMatrix(PLUS, 2),), labels=(2,))
    with pytest.raises(ValueError):
        qi_state(e, 2)


def test_ensemble_rejects_duplicate_labels():
    with pytest.raises(ValueError, match="distinct"):
        Ensemble(probs=(0.5, 0.5), members=(DensityMatrix(PLUS, 2),) * 2, labels=(1, 1))


def test_ensemble_rejects_bad_probabilities():
    with pytest.raises(ValueError):
        Ensemble(probs=(0.7, 0.7), members=(DensityMatrix(PLUS, 2),) * 2, labels=(0, 1))
    with pytest.raises(ValueError):
        Ensemble(probs=(1.5, -0.5), members=(DensityMatrix(PLUS, 2),) * 2, labels=(0, 1))


def test_ensemble_rejects_mixed_member_dims():
    with pytest.raises(DimensionError):
        Ensemble(probs=(0.5, 0.5), members=(DensityMatrix(PLUS, 2), maximally_mixed(3)), labels=(0, 1))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 4), st.integers(2, 4))
def test_qi_state_properties(seed, dA, dB):
    e = random_qi(dA, dB, seed)
    chi = qi_state(e, dB)
    validate(chi.mat, dA, dB)
    r = chi.mat.reshape(dA, dB, dA, dB)
    # exact zeros whenever the two B indices differ
    for j in range(dB):
        for l in range(dB):
            if j != l:
                assert np.all(r[:, j, :, l] == 0)
    np.testing.assert_allclose(chi.reduced("A").mat, e.average(), atol=1e-12)
    assert abs(sum(e.probs) - 1.0) <= 1e-12


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(2, 4), st.integers(2, 4))
def test_qi_state_fixed_by_reference_measurement(seed, dA, dB):
    # oracle: direct channel application as a sum of Kraus sandwiches
    chi = qi_state(random_qi(dA, dB, seed), dB)
    direct = sum(
        np.kron(np.eye(dA), np.outer(np.eye(dB)[j], np.eye(dB)[j])) @ chi.mat @ np.kron(np.eye(dA), np.outer(np.eye(dB)[j], np.eye(dB)[j]))
        for j in range(dB)
    )
    np.testing.assert_allclose(direct, chi.mat, atol=1e-12)
    np.testing.assert_allclose(project_local(chi, "B", computational_basis(dB)).mat, chi.mat, atol=1e-12)


def test_random_qi_shape():
    e = random_qi(3, 2, 1)
    assert e.labels == (0, 1) and e.dA == 3 and len(e.members) == 2
    with pytest.raises(ValueError):
        random_qi(1, 2, 1)


def test_random_density_rank_one_is_pure():
    rho = random_density(4, 1, 8)
    w = np.linalg.eigvalsh(rho.mat)
    np.testing.assert_allclose(w, [0, 0, 0, 1], atol=1e-12)


def test_random_density_full_rank():
    for seed in range(20):
        assert np.linalg.eigvalsh(random_density(4, 4, seed).mat).min() > 0


def test_random_density_deterministic():
    assert np.array_equal(random_density(3, 2, 5).mat, random_density(3, 2, 5).mat)
    with pytest.raises(ValueError):
        random_density(3, 4, 5)


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 5), st.integers(1, 5))
def test_generators_pass_validate(seed, dim, rank):
    rank = min(rank, dim)
    rho = random_density(dim, rank, seed)
    validate(rho.mat, dim)


@pytest.mark.parametrize(
    "spec,dims",
    [("counterexample", (2, 2)), ("maxmix:4", (2, 2)), ("maxmix:6", (3, 2)), ("maxmix:3", (3, 1)),
     ("maxmix:2x3", (2, 3)), ("maxcoh:4", (2, 2)), ("maxcoh:1x2", (1, 2))],
)
def test_presets(spec, dims):
    rho = preset(spec)
    assert rho.dims == dims
    validate(rho.mat, *dims)


def test_maximally_coherent_is_pure_uniform():
    rho = maximally_coherent(2, 2)
    np.testing.assert_allclose(rho.mat, np.full((4, 4), 0.25))
    np.testing.assert_allclose(np.linalg.eigvalsh(rho.mat), [0, 0, 0, 1], atol=1e-12)


@pytest.mark.parametrize("bad", ["nope", "maxmix", "maxmix:0", "counterexample:2", "maxmix:axb"])
def test_bad_presets(bad):
    with pytest.raises((KeyError, ValueError)):
        preset(bad)


def test_parse_dims():
    assert parse_dims("8") == (4, 2)
    assert parse_dims("9") == (3, 3)
    assert parse_dims("1") == (1, 1)
