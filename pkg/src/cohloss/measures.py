"""Coherence quantifiers in the computational (product) reference basis.

To measure coherence in another basis, conjugate the state first.
Entropies are in bits.
"""
import enum
import math

import numpy as np

from . import linalg
from .errors import DimensionError
from .states import DensityMatrix, as_state

EIGEN_FLOOR = 1e-12
RELENT_NEGATIVE_TOL = 1e-9


class MeasureKind(enum.Enum):
    L1 = "l1"
    RELATIVE_ENTROPY = "relent"
    ABS_SUM = "abs-sum"

    @classmethod
    def parse(cls, name) -> "MeasureKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(name)
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown measure {name!r}; choose from {choices}") from None


def dephase(rho) -> DensityMatrix:
    """Delete every off-diagonal entry; the diagonal is kept as is."""
    rho = as_state(rho)
    return DensityMatrix(np.diag(np.diag(rho.mat)), rho.dA, rho.dB)


def abs_sum(rho) -> float:
    """Sum of |entry| over the whole matrix (equals 1 + c_l1 for a valid state)."""
    return float(np.sum(np.abs(as_state(rho).mat)))


def c_l1(rho) -> float:
    m = as_state(rho).mat
    a = np.abs(m)
    return float(np.sum(a) - np.sum(np.diag(a)))


def entropy(eigenvalues) -> float:
    """Von Neumann entropy in bits from a spectrum; values below 1e-12 count as 0."""
    w = np.asarray(eigenvalues, dtype=float)
    w = w[w > EIGEN_FLOOR]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    return entropy(linalg.eigvalsh(as_state(rho).mat))


def c_relent(rho) -> float:
    """S(dephase(rho)) - S(rho), in bits.

    Round-off negatives down to -1e-9 are reported as 0; anything lower is
    returned unclamped so that it stays visible.
    """
    m = as_state(rho).mat
    value = entropy(np.diag(m).real) - entropy(linalg.eigvalsh(m))
    if -RELENT_NEGATIVE_TOL <= value < 0.0:
        return 0.0
    return value


_MEASURES = {
    MeasureKind.L1: c_l1,
    MeasureKind.RELATIVE_ENTROPY: c_relent,
    MeasureKind.ABS_SUM: abs_sum,
}


def coherence(rho, kind) -> float:
    return _MEASURES[MeasureKind.parse(kind)](rho)


def direct_sum(probs, blocks) -> DensityMatrix:
    """Block-diagonal state (+)_i p_i rho_i, single-partite over the summed dimension."""
    blocks = [as_state(b) for b in blocks]
    if len(probs) != len(blocks) or not blocks:
        raise ValueError("need one probability per block")
    total = sum(b.dim for b in blocks)
    if total > linalg.MAX_DIM:
        raise DimensionError(f"direct-sum dimension {total} exceeds maximum {linalg.MAX_DIM}")
    m = np.zeros((total, total), dtype=np.complex128)
    at = 0
    for p, b in zip(probs, blocks):
        m[at:at + b.dim, at:at + b.dim] = p * b.mat
        at += b.dim
    return DensityMatrix(m, total, 1)


def block_additivity_check(probs, blocks, kind) -> float:
    """|C((+)_i p_i rho_i) - sum_i p_i C(rho_i)| for the given measure."""
    probs = [float(p) for p in probs]
    if min(probs) < 0.0 or abs(sum(probs) - 1.0) > 1e-9:
        raise ValueError("probs must be a probability distribution")
    combined = coherence(direct_sum(probs, blocks), kind)
    parts = math.fsum(p * coherence(b, kind) for p, b in zip(probs, blocks))
    return abs(combined - parts)
