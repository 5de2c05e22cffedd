"""Dense complex linear algebra on small square matrices.

Matrices are plain ``numpy`` complex128 arrays. Composite indices follow the
A-major convention ``i * d_B + j`` throughout the package.

Randomness comes from ``numpy.random.Generator`` over PCG64 seeded with a
64-bit integer; independent sub-streams are obtained with ``Generator.spawn``
(SeedSequence splitting), so parallel consumers never share a stream.
"""
from typing import NamedTuple

import numpy as np

from . import _backend
from .errors import ConvergenceError, DimensionError, NotHermitianError

MAX_DIM = 64
HERMITIAN_TOL = 1e-9
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

SIDES = ("A", "B")


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite square complex128 array of size at most ``MAX_DIM``."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionError(f"dimension {a.shape[0]} exceeds maximum {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def check_side(side: str) -> str:
    if side not in SIDES:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return side


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def hermitian_residual(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - dagger(m))))


def max_abs_diff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def tensor(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*db + j, k*db + l)`` is ``a[i,k] * b[j,l]``."""
    a = as_matrix(a)
    b = as_matrix(b)
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_DIM:
        raise DimensionError(f"tensor product dimension {dim} exceeds maximum {MAX_DIM}")
    return np.kron(a, b)


def partial_trace(m, dA: int, dB: int, side: str) -> np.ndarray:
    """Trace out ``side``: ``side='B'`` returns the dA x dA marginal on A."""
    m = as_matrix(m)
    check_side(side)
    if dA < 1 or dB < 1 or dA * dB != m.shape[0]:
        raise DimensionError(f"dims {dA}x{dB} do not match matrix dimension {m.shape[0]}")
    r = m.reshape(dA, dB, dA, dB)
    if side == "B":
        return np.einsum("ijkj->ik", r)
    return np.einsum("ijil->jl", r)


def eig_hermitian(m) -> EigenDecomposition:
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Eigenvalues are returned ascending, with eigenvector ``k`` in column ``k``.
    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``JACOBI_TOL * max(1, ||m||_F)`` or after ``JACOBI_MAX_SWEEPS`` sweeps.

    Raises:
        NotHermitianError: if ``max|m - m^dag| > 1e-9``.
        ConvergenceError: if the sweep limit is hit first.
    """
    m = as_matrix(m)
    res = hermitian_residual(m)
    if res > HERMITIAN_TOL:
        raise NotHermitianError(res)
    tol = JACOBI_TOL * max(1.0, float(np.linalg.norm(m)))
    w, v, _sweeps, off = _backend.kernels.jacobi_eigh(m, tol, JACOBI_MAX_SWEEPS)
    if not off < tol:
        raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps", off)
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order])


def eigvalsh(m) -> np.ndarray:
    return eig_hermitian(m).eigenvalues


def unitary_from_generator(h) -> np.ndarray:
    """``exp(i h)`` for Hermitian ``h``, assembled from its eigendecomposition."""
    w, v = eig_hermitian(h)
    return (v * np.exp(1j * w)) @ dagger(v)


def unitarity_residual(u) -> float:
    u = np.asarray(u)
    return max_abs_diff(dagger(u) @ u, np.eye(u.shape[1]))


def make_rng(seed=None) -> np.random.Generator:
    """Generator for a 64-bit seed (or pass an existing Generator through)."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is not None and not 0 <= int(seed) < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def split_rng(rng, n: int) -> list:
    """``n`` independent child streams of ``rng``."""
    return make_rng(rng).spawn(n)


def ginibre(rows: int, cols: int, rng) -> np.ndarray:
    """Matrix of i.i.d. complex Gaussians, real and imaginary parts each of variance 1."""
    rng = make_rng(rng)
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return re + 1j * im


def random_ginibre(dim: int, rng) -> np.ndarray:
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if dim > MAX_DIM:
        raise DimensionError(f"dimension {dim} exceeds maximum {MAX_DIM}")
    return ginibre(dim, dim, rng)


def random_unitary(dim: int, rng) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal made positive."""
    rng = make_rng(rng)
    while True:
        z = random_ginibre(dim, rng)
        q, r = np.linalg.qr(z)
        d = np.diag(r)
        mag = np.abs(d)
        if np.all(mag > 1e-12):
            return q * (d / mag)
