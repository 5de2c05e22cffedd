"""Local projective measurements and mutually unbiased bases (MUBs)."""
import math
from dataclasses import dataclass

import numpy as np

from . import _backend, linalg
from .errors import DimensionError, PreconditionError
from .states import DensityMatrix, Ensemble, qi_state

UNITARY_TOL = 1e-9
MUB_PRIMES = (2, 3, 5, 7)


@dataclass(frozen=True, eq=False)
class ProjectiveBasis:
    """Orthonormal basis stored as a unitary whose columns are the basis vectors."""

    u: np.ndarray
    name: str = ""

    def __post_init__(self):
        u = linalg.as_matrix(self.u).copy()
        res = linalg.unitarity_residual(u)
        if res > UNITARY_TOL:
            raise ValueError(f"basis matrix is not unitary (residual {res:.3e})")
        u.flags.writeable = False
        object.__setattr__(self, "u", u)

    @property
    def dim(self) -> int:
        return self.u.shape[0]

    def vector(self, m: int) -> np.ndarray:
        return self.u[:, m]

    def projectors(self) -> list:
        return [np.outer(self.u[:, m], self.u[:, m].conj()) for m in range(self.dim)]

    def is_computational(self) -> bool:
        return bool(np.array_equal(self.u, np.eye(self.dim)))


def computational_basis(dim: int) -> ProjectiveBasis:
    return ProjectiveBasis(np.eye(dim, dtype=np.complex128), "computational")


def dual_basis_qubit() -> ProjectiveBasis:
    """{|+>, |->} as columns (1, 1)/sqrt2 and (1, -1)/sqrt2."""
    s = 1.0 / math.sqrt(2.0)
    return ProjectiveBasis(np.array([[s, s], [s, -s]], dtype=np.complex128), "dual")


def project_local(rho: DensityMatrix, side: str, basis: ProjectiveBasis) -> DensityMatrix:
    """Non-selective measurement of one subsystem: sum_m (1 (x) P_m) rho (1 (x) P_m).

    ``side='A'`` applies the mirror image ``(P_m (x) 1)``.
    """
    linalg.check_side(side)
    d_side = rho.side_dim(side)
    if basis.dim != d_side:
        raise DimensionError(f"basis dimension {basis.dim} does not match side {side} dimension {d_side}")
    if basis.is_computational():
        out = _dephase_side(rho, side)
    else:
        out = _backend.kernels.project_local(rho.mat, rho.dA, rho.dB, basis.u, side == "B")
    return DensityMatrix(out, rho.dA, rho.dB)


def _dephase_side(rho, side):
    # computational-basis fast path: zero the coherences between distinct indices of `side`
    r = rho.mat.reshape(rho.dA, rho.dB, rho.dA, rho.dB)
    d = rho.side_dim(side)
    keep = np.eye(d, dtype=bool)
    mask = keep[None, :, None, :] if side == "B" else keep[:, None, :, None]
    return np.where(mask, r, 0.0).reshape(rho.dim, rho.dim)


def verify_unbiased(b1: ProjectiveBasis, b2: ProjectiveBasis) -> float:
    """max_{i,j} | |<b1_i|b2_j>|^2 - 1/d |."""
    if b1.dim != b2.dim:
        raise DimensionError(f"basis dimensions differ: {b1.dim} vs {b2.dim}")
    overlaps = np.abs(linalg.dagger(b1.u) @ b2.u) ** 2
    return float(np.max(np.abs(overlaps - 1.0 / b1.dim)))


@dataclass(frozen=True, eq=False)
class MubFamily:
    dim: int
    bases: tuple

    def nontrivial(self) -> tuple:
        """All bases except the leading computational one."""
        return self.bases[1:]

    def max_residual(self) -> float:
        worst = 0.0
        for a in range(len(self.bases)):
            for b in range(a + 1, len(self.bases)):
                worst = max(worst, verify_unbiased(self.bases[a], self.bases[b]))
        return worst


def mub_family(dim: int) -> MubFamily:
    """Complete set of d + 1 MUBs for a prime d <= 7, computational basis first.

    For odd d, basis ``a`` has components <k|lambda^a_j> = w^(a k^2 + j k) / sqrt(d)
    with w = exp(2 pi i / d). The qubit family is written out explicitly.
    """
    if dim not in MUB_PRIMES:
        raise ValueError(f"unsupported dimension {dim}: MUBs are built for primes {MUB_PRIMES}")
    bases = [computational_basis(dim)]
    if dim == 2:
        s = 1.0 / math.sqrt(2.0)
        bases.append(dual_basis_qubit())
        bases.append(ProjectiveBasis(np.array([[s, s], [1j * s, -1j * s]]), "mub:1"))
    else:
        k = np.arange(dim)[:, None]
        j = np.arange(dim)[None, :]
        for a in range(dim):
            # exponent reduced mod d first: keeps the phase argument in [0, 2 pi)
            exponent = (a * k * k + j * k) % dim
            u = np.exp(2j * np.pi * exponent / dim) / math.sqrt(dim)
            bases.append(ProjectiveBasis(u, f"mub:{a}"))
    return MubFamily(dim, tuple(bases))


def mub_basis(dim: int, index: int) -> ProjectiveBasis:
    """The ``index``-th nontrivial MUB basis (0-based, computational excluded)."""
    family = mub_family(dim)
    if not 0 <= index < dim:
        raise ValueError(f"mub index must be in 0..{dim - 1}, got {index}")
    return family.nontrivial()[index]


def mub_collapse_check(e: Ensemble, dB: int, basis: ProjectiveBasis) -> float:
    """Max-entry deviation of the measured incoherent-on-B state from rho_A (x) 1/dB.

    Raises :class:`PreconditionError` if ``basis`` is not unbiased with respect
    to the computational basis on B.
    """
    if basis.dim != dB:
        raise DimensionError(f"basis dimension {basis.dim} does not match dB={dB}")
    res = verify_unbiased(computational_basis(dB), basis)
    if res > UNITARY_TOL:
        raise PreconditionError("basis is not unbiased with respect to the computational basis", res)
    chi = qi_state(e, dB)
    measured = project_local(chi, "B", basis)
    rho_a = linalg.partial_trace(chi.mat, chi.dA, dB, "B")
    target = linalg.tensor(rho_a, np.eye(dB) / dB)
    return linalg.max_abs_diff(measured.mat, target)


def parse_basis(spec: str, dim: int, loader=None) -> ProjectiveBasis:
    """Resolve ``computational``, ``dual``, ``mub:<a>`` or a unitary JSON file path."""
    if spec == "computational":
        return computational_basis(dim)
    if spec == "dual":
        if dim != 2:
            raise DimensionError(f"'dual' is the qubit basis; side dimension is {dim}")
        return dual_basis_qubit()
    if spec.startswith("mub:"):
        try:
            index = int(spec[4:])
        except ValueError:
            raise ValueError(f"bad MUB spec {spec!r}; expected mub:<index>") from None
        return mub_basis(dim, index)
    if loader is None:
        raise ValueError(f"unknown basis spec {spec!r}")
    basis = loader(spec)
    if basis.dim != dim:
        raise DimensionError(f"basis file has dimension {basis.dim}, side dimension is {dim}")
    return basis
