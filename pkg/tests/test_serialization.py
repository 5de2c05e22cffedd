import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohloss import linalg
from cohloss.errors import InvalidStateError
from cohloss.measurement import ProjectiveBasis, mub_basis
from cohloss.serialization import (
    Check,
    Report,
    basis_from_dict,
    dumps,
    load_state,
    matrix_from_json,
    matrix_to_json,
    read_basis,
    read_state,
    state_from_dict,
    tolerance_scale,
    write_basis,
    write_state,
)
from cohloss.states import DensityMatrix, counterexample_state, random_density

seeds = st.integers(min_value=0, max_value=2**64 - 1)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 6))
def test_matrix_round_trip_is_bit_exact(seed, dim):
    m = linalg.random_ginibre(dim, seed) / 7.0
    back = matrix_from_json(json.loads(json.dumps(matrix_to_json(m))))
    assert np.array_equal(back, m)


def test_state_file_round_trip(tmp_path):
    rho = DensityMatrix(random_density(6, 3, 2).mat, 3, 2)
    path = tmp_path / "s.json"
    write_state(path, rho, name="sample")
    back = read_state(path)
    assert back.dims == (3, 2)
    assert np.array_equal(back.mat, rho.mat)
    assert json.loads(path.read_text())["name"] == "sample"


def test_basis_file_round_trip(tmp_path):
    b = mub_basis(5, 3)
    write_basis(tmp_path / "b.json", b)
    back = read_basis(tmp_path / "b.json")
    assert np.array_equal(back.u, b.u) and back.name == "mub:3"


def test_state_dims_default_to_single_partite():
    rho = state_from_dict({"matrix": matrix_to_json(np.eye(3) / 3)})
    assert rho.dims == (3, 1)


@pytest.mark.parametrize(
    "payload",
    [
        [],
        {"dims": [2, 2]},
        {"matrix": []},
        {"matrix": [[[1, 0], [0, 0]]]},
        {"matrix": [[[1, 0]]], "dims": [1]},
        {"matrix": [[[1, "0"]]]},
        {"matrix": [[[True, 0]]]},
        {"matrix": [[1.0]]},
    ],
)
def test_malformed_state_payloads(payload):
    with pytest.raises(ValueError):
        state_from_dict(payload)


def test_invalid_state_payload_reports_invariant():
    with pytest.raises(InvalidStateError) as info:
        state_from_dict({"matrix": matrix_to_json(np.eye(2))})
    assert info.value.invariant == "trace"


def test_basis_dim_mismatch():
    with pytest.raises(ValueError):
        basis_from_dict({"dim": 3, "unitary": matrix_to_json(np.eye(2))})
    with pytest.raises(ValueError):
        basis_from_dict({"unitary": matrix_to_json(np.ones((2, 2)))})


def test_load_state_prefers_presets_then_files(tmp_path):
    assert np.array_equal(load_state("counterexample").mat, counterexample_state().mat)
    p = tmp_path / "x.json"
    write_state(p, counterexample_state())
    assert load_state(str(p)).dims == (2, 2)
    with pytest.raises(OSError):
        load_state(str(tmp_path / "missing.json"))


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [0.1]}) == '{\n  "a": [\n    0.1\n  ],\n  "b": 1\n}\n'
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})


def test_tolerance_scale_env(monkeypatch):
    monkeypatch.delenv("COHLOSS_TOLERANCE_SCALE", raising=False)
    assert tolerance_scale() == 1.0
    monkeypatch.setenv("COHLOSS_TOLERANCE_SCALE", "10")
    assert tolerance_scale() == 10.0
    for bad in ("abc", "0", "-1", "inf"):
        monkeypatch.setenv("COHLOSS_TOLERANCE_SCALE", bad)
        with pytest.raises(ValueError):
            tolerance_scale()


def test_check_semantics():
    assert Check("eq", 1e-13, 1e-12).passed
    assert not Check("eq", 2e-12, 1e-12).passed
    # strict a > b as (b - a) <= -tol
    assert Check("strict", -1.0, -1e-9).passed
    assert not Check("strict", 0.0, -1e-9).passed


def test_report_layout():
    r = Report("demo", {"x": 1}, seed=3, tolerance_scale=2.0)
    r.check("c", 1e-12, 1e-12, note="v")
    r.results["value"] = 0.5
    d = json.loads(r.to_json(wall_time=0.0))
    assert d["verdict"] == "pass"
    assert d["tolerances"] == {"c": 2e-12}
    assert d["checks"][0]["values"] == {"note": "v"}
    assert set(d) == {"command", "args", "seed", "tolerance_scale", "tolerances", "checks", "results", "verdict", "wall_time_s"}


def test_basis_json_preserves_unitarity_check():
    u = linalg.random_unitary(4, 9)
    back = basis_from_dict({"unitary": matrix_to_json(u)})
    assert isinstance(back, ProjectiveBasis)
    assert np.array_equal(back.u, u)
