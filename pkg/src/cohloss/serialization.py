"""JSON formats for states, bases and reports.

A complex entry is a ``[re, im]`` pair. Floats are written with Python's
shortest round-trip ``repr``, so reading a file back reproduces every
double exactly.

State file::

    {"name": "optional", "dims": [dA, dB], "matrix": [[[re, im], ...], ...]}

Basis file (columns are the basis vectors)::

    {"name": "optional", "dim": d, "unitary": [[[re, im], ...], ...]}
"""
import json
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .measurement import ProjectiveBasis
from .states import DensityMatrix, preset, validate

TOLERANCE_SCALE_ENV = "COHLOSS_TOLERANCE_SCALE"


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ValueError("matrix must be a non-empty list of rows")
    n = len(data)
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise ValueError(f"matrix row {i} must have {n} entries")
        for j, z in enumerate(row):
            if (
                not isinstance(z, list)
                or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            ):
                raise ValueError(f"entry ({i}, {j}) must be a [re, im] pair of numbers")
            out[i, j] = complex(z[0], z[1])
    return linalg.as_matrix(out)


def state_to_dict(rho: DensityMatrix, name=None) -> dict:
    d = {"dims": [rho.dA, rho.dB], "matrix": matrix_to_json(rho.mat)}
    if name:
        d["name"] = name
    return d


def state_from_dict(d) -> DensityMatrix:
    if not isinstance(d, dict) or "matrix" not in d:
        raise ValueError("state file must be an object with a 'matrix' field")
    m = matrix_from_json(d["matrix"])
    dims = d.get("dims", [m.shape[0], 1])
    if not isinstance(dims, list) or len(dims) != 2 or not all(isinstance(x, int) for x in dims):
        raise ValueError("'dims' must be a pair of integers [dA, dB]")
    return validate(m, dims[0], dims[1])


def basis_to_dict(basis: ProjectiveBasis) -> dict:
    d = {"dim": basis.dim, "unitary": matrix_to_json(basis.u)}
    if basis.name:
        d["name"] = basis.name
    return d


def basis_from_dict(d) -> ProjectiveBasis:
    if not isinstance(d, dict) or "unitary" not in d:
        raise ValueError("basis file must be an object with a 'unitary' field")
    u = matrix_from_json(d["unitary"])
    if "dim" in d and d["dim"] != u.shape[0]:
        raise ValueError(f"'dim' is {d['dim']} but the unitary is {u.shape[0]} x {u.shape[0]}")
    return ProjectiveBasis(u, d.get("name", ""))


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def read_state(path) -> DensityMatrix:
    return state_from_dict(_read_json(path))


def write_state(path, rho: DensityMatrix, name=None):
    _write_json(path, state_to_dict(rho, name))


def read_basis(path) -> ProjectiveBasis:
    return basis_from_dict(_read_json(path))


def write_basis(path, basis: ProjectiveBasis):
    _write_json(path, basis_to_dict(basis))


def load_state(spec: str) -> DensityMatrix:
    """A preset name (``counterexample``, ``maxmix:<d>``, ``maxcoh:<d>``) or a state file path."""
    name = spec.partition(":")[0]
    if name in ("counterexample", "maxmix", "maxcoh") and not os.path.exists(spec):
        return preset(spec)
    return read_state(spec)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def tolerance_scale() -> float:
    raw = os.environ.get(TOLERANCE_SCALE_ENV, "1")
    try:
        scale = float(raw)
    except ValueError:
        raise ValueError(f"{TOLERANCE_SCALE_ENV} must be a number, got {raw!r}") from None
    if not (math.isfinite(scale) and scale > 0):
        raise ValueError(f"{TOLERANCE_SCALE_ENV} must be positive and finite, got {raw!r}")
    return scale


@dataclass
class Check:
    """One pass/fail record: passes iff ``residual <= tolerance``.

    Strict inequalities ``a > b`` are encoded as residual ``b - a`` against a
    negative tolerance.
    """

    name: str
    residual: float
    tolerance: float
    values: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self):
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "values": self.values,
            "passed": self.passed,
        }


@dataclass
class Report:
    command: str
    args: dict
    seed: object = None
    tolerance_scale: float = 1.0
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    started: float = field(default_factory=time.perf_counter)

    def tol(self, base: float) -> float:
        return base * self.tolerance_scale

    def check(self, name, residual, base_tolerance, **values) -> Check:
        c = Check(name, float(residual), self.tol(base_tolerance), values)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self, wall_time=None) -> dict:
        if wall_time is None:
            wall_time = time.perf_counter() - self.started
        return {
            "command": self.command,
            "args": self.args,
            "seed": self.seed,
            "tolerance_scale": self.tolerance_scale,
            "tolerances": {c.name: c.tolerance for c in self.checks},
            "checks": [c.to_dict() for c in self.checks],
            "results": self.results,
            "verdict": self.verdict,
            "wall_time_s": wall_time,
        }

    def to_json(self, wall_time=None) -> str:
        return dumps(self.to_dict(wall_time))
