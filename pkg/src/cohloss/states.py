"""Validated bipartite density matrices, presets and random state generators."""
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionError, InvalidStateError

STATE_TOL = 1e-9


def _frozen(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A quantum state on ``A (x) B`` with composite index ``i * dB + j``.

    Single-partite states use ``dB = 1``. Construct through :func:`validate`
    unless the matrix is valid by construction.
    """

    mat: np.ndarray
    dA: int
    dB: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mat", _frozen(self.mat))
        if self.dA < 1 or self.dB < 1 or self.dA * self.dB != self.mat.shape[0]:
            raise DimensionError(f"dims {self.dA}x{self.dB} do not match matrix dimension {self.mat.shape[0]}")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def dims(self) -> tuple:
        return (self.dA, self.dB)

    def side_dim(self, side: str) -> int:
        return self.dA if linalg.check_side(side) == "A" else self.dB

    def reduced(self, side_kept: str) -> "DensityMatrix":
        """Marginal on ``side_kept`` (the other side is traced out)."""
        traced = "B" if linalg.check_side(side_kept) == "A" else "A"
        m = linalg.partial_trace(self.mat, self.dA, self.dB, traced)
        return DensityMatrix(m, m.shape[0], 1)

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)


def validate(mat, dA: int, dB: int = 1) -> DensityMatrix:
    """Check the density-matrix invariants and wrap ``mat``.

    Raises :class:`InvalidStateError` naming the first violated invariant
    (``hermitian``, ``trace`` or ``positive``) with its residual.
    """
    try:
        m = linalg.as_matrix(mat)
    except DimensionError:
        raise
    except ValueError as exc:
        raise InvalidStateError("finite", math.inf, str(exc)) from None
    if dA < 1 or dB < 1 or dA * dB != m.shape[0]:
        raise DimensionError(f"dims {dA}x{dB} do not match matrix dimension {m.shape[0]}")
    herm = linalg.hermitian_residual(m)
    if herm > STATE_TOL:
        raise InvalidStateError("hermitian", herm)
    tr = abs(complex(np.trace(m)) - 1.0)
    if tr > STATE_TOL:
        raise InvalidStateError("trace", tr)
    lo = float(linalg.eigvalsh(m)[0])
    if lo < -STATE_TOL:
        raise InvalidStateError("positive", -lo, "minimum eigenvalue is negative")
    return DensityMatrix(m, dA, dB)


def is_valid(mat, dA: int, dB: int = 1) -> bool:
    try:
        validate(mat, dA, dB)
    except ValueError:
        return False
    return True


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.complex128)
    return np.outer(v, v.conj())


PLUS = np.array([1.0, 1.0], dtype=np.complex128) / math.sqrt(2.0)
MINUS = np.array([1.0, -1.0], dtype=np.complex128) / math.sqrt(2.0)
# written out rather than outer(PLUS, PLUS): entries are exactly +-1/2
PLUS_PROJ = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=np.complex128)
MINUS_PROJ = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=np.complex128)


def counterexample_state() -> DensityMatrix:
    """(|+><+| (x) |0><0| + |-><-| (x) |1><1|) / 2 on two qubits."""
    m = 0.5 * linalg.tensor(PLUS_PROJ, projector(ket(0, 2))) + 0.5 * linalg.tensor(MINUS_PROJ, projector(ket(1, 2)))
    return DensityMatrix(m, 2, 2)


def counterexample_ensemble() -> "Ensemble":
    return Ensemble(
        probs=(0.5, 0.5),
        members=(DensityMatrix(PLUS_PROJ, 2), DensityMatrix(MINUS_PROJ, 2)),
        labels=(0, 1),
    )


def maximally_mixed(dA: int, dB: int = 1) -> DensityMatrix:
    d = dA * dB
    if d > linalg.MAX_DIM:
        raise DimensionError(f"dimension {d} exceeds maximum {linalg.MAX_DIM}")
    return DensityMatrix(np.eye(d) / d, dA, dB)


def maximally_coherent(dA: int, dB: int = 1) -> DensityMatrix:
    """Pure state (1/sqrt(d)) sum_i |i> over the composite basis."""
    d = dA * dB
    if d > linalg.MAX_DIM:
        raise DimensionError(f"dimension {d} exceeds maximum {linalg.MAX_DIM}")
    return DensityMatrix(np.full((d, d), 1.0 / d), dA, dB)


def _smallest_prime_factor(n: int) -> int:
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            return p
    return n


def parse_dims(text: str) -> tuple:
    """``"2x3"`` -> (2, 3); a bare ``"d"`` splits off its smallest prime factor as B.

    A prime ``d`` has no split and gives the single-partite ``(d, 1)``.
    """
    text = text.strip().lower()
    if "x" in text:
        a, b = text.split("x", 1)
        dA, dB = int(a), int(b)
    else:
        d = int(text)
        if d < 1:
            raise ValueError(f"dimension must be positive, got {d}")
        p = _smallest_prime_factor(d) if d > 1 else 1
        dA, dB = (d // p, p) if p < d else (d, 1)
    if dA < 1 or dB < 1:
        raise ValueError(f"dimensions must be positive, got {dA}x{dB}")
    return dA, dB


PRESETS = {
    "counterexample": lambda arg: counterexample_state(),
    "maxmix": lambda arg: maximally_mixed(*parse_dims(arg)),
    "maxcoh": lambda arg: maximally_coherent(*parse_dims(arg)),
}


def preset(spec: str) -> DensityMatrix:
    """Build a named preset: ``counterexample``, ``maxmix:<d>``, ``maxcoh:<d>``.

    ``<d>`` is either a total dimension or an explicit ``<dA>x<dB>`` split.
    """
    name, _, arg = spec.partition(":")
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}")
    if name == "counterexample":
        if arg:
            raise ValueError("preset 'counterexample' takes no argument")
    elif not arg:
        raise ValueError(f"preset {name!r} needs a dimension, e.g. {name}:4")
    return PRESETS[name](arg)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted states on A, each tagged with a distinct incoherent label on B."""

    probs: tuple
    members: tuple
    labels: tuple
    dA: int = field(init=False)

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        members = tuple(self.members)
        labels = tuple(int(j) for j in self.labels)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "labels", labels)
        if not (len(probs) == len(members) == len(labels)) or not probs:
            raise ValueError("probs, members and labels must be non-empty and of equal length")
        if min(probs) < 0.0 or abs(sum(probs) - 1.0) > STATE_TOL:
            raise ValueError(f"probs must be a distribution, got sum {sum(probs)!r} min {min(probs)!r}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"labels must be distinct, got {labels}")
        if min(labels) < 0:
            raise ValueError("labels must be non-negative")
        dims = {m.dim for m in members}
        if len(dims) != 1 or any(m.dB != 1 for m in members):
            raise DimensionError("members must be single-partite states of one common dimension")
        object.__setattr__(self, "dA", dims.pop())

    def average(self) -> np.ndarray:
        """sum_i p_i rho_i, i.e. the A-marginal of the incoherent-on-B state."""
        return sum(p * m.mat for p, m in zip(self.probs, self.members))


def qi_state(e: Ensemble, dB: int) -> DensityMatrix:
    """sum_i p_i rho_i (x) |label_i><label_i|: quantum on A, incoherent on B."""
    if max(e.labels) >= dB:
        raise ValueError(f"label {max(e.labels)} out of range for dB={dB}")
    d = e.dA * dB
    if d > linalg.MAX_DIM:
        raise DimensionError(f"dimension {d} exceeds maximum {linalg.MAX_DIM}")
    m = np.zeros((d, d), dtype=np.complex128)
    r = m.reshape(e.dA, dB, e.dA, dB)
    for p, member, j in zip(e.probs, e.members, e.labels):
        r[:, j, :, j] += p * member.mat
    return DensityMatrix(m, e.dA, dB)


def random_density(dim: int, rank: int, rng) -> DensityMatrix:
    """G G^dag / tr(G G^dag) for a dim x rank Ginibre block G (single-partite)."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must satisfy 1 <= rank <= dim, got rank={rank} dim={dim}")
    if dim > linalg.MAX_DIM:
        raise DimensionError(f"dimension {dim} exceeds maximum {linalg.MAX_DIM}")
    g = linalg.ginibre(dim, rank, rng)
    m = g @ linalg.dagger(g)
    m = 0.5 * (m + linalg.dagger(m))
    return DensityMatrix(m / np.trace(m).real, dim, 1)


def random_probs(n: int, rng) -> np.ndarray:
    """Flat-Dirichlet weights via normalized standard exponentials."""
    x = linalg.make_rng(rng).standard_exponential(n)
    return x / x.sum()


def random_qi(dA: int, dB: int, rng) -> Ensemble:
    """Ensemble with ``dB`` full-rank members labelled 0..dB-1."""
    if dA < 2 or dB < 2:
        raise ValueError(f"need dA, dB >= 2, got {dA}, {dB}")
    rng = linalg.make_rng(rng)
    probs = random_probs(dB, rng)
    members = tuple(random_density(dA, dA, rng) for _ in range(dB))
    return Ensemble(probs=tuple(probs), members=members, labels=tuple(range(dB)))


def random_incoherent(dim: int, rng) -> DensityMatrix:
    """Diagonal state with flat-Dirichlet populations."""
    return DensityMatrix(np.diag(random_probs(dim, rng)).astype(np.complex128), dim, 1)


def as_state(rho) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    m = linalg.as_matrix(rho)
    return DensityMatrix(m, m.shape[0], 1)
