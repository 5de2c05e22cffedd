"""The compiled and pure-Python kernels must be interchangeable."""
import numpy as np
import pytest

from cohloss import _backend, linalg

pytestmark = pytest.mark.skipif(len(_backend.available()) < 2, reason="compiled extension not built")


@pytest.fixture(scope="module")
def both():
    return _backend.load("cython"), _backend.load("python")


@pytest.mark.parametrize("dim", [1, 2, 3, 4, 7, 16, 33, 64])
def test_jacobi_backends_agree(both, dim):
    g = linalg.random_ginibre(dim, dim)
    h = (g + g.conj().T) / 2
    tol = 1e-12 * max(1.0, np.linalg.norm(h))
    results = [k.jacobi_eigh(h, tol, 100) for k in both]
    for w, v, sweeps, off in results:
        assert off < tol
        assert np.max(np.abs((v * w) @ v.conj().T - h)) <= 1e-9
    np.testing.assert_allclose(np.sort(results[0][0]), np.sort(results[1][0]), atol=1e-12)


def test_jacobi_leaves_input_untouched(both):
    h = np.array([[1.0, 0.5j], [-0.5j, 2.0]])
    before = h.copy()
    for k in both:
        k.jacobi_eigh(h, 1e-12, 100)
    assert np.array_equal(h, before)


@pytest.mark.parametrize("dA,dB", [(1, 2), (2, 2), (3, 2), (2, 5), (4, 4)])
@pytest.mark.parametrize("side_b", [True, False])
def test_projection_backends_agree(both, dA, dB, side_b):
    rng = linalg.make_rng(dA * 10 + dB)
    rho = linalg.random_ginibre(dA * dB, rng)
    u = linalg.random_unitary(dB if side_b else dA, rng)
    c, p = (k.project_local(rho, dA, dB, u, side_b) for k in both)
    np.testing.assert_allclose(c, p, atol=1e-14)


def test_projection_matches_explicit_kron_sandwich(both):
    rng = linalg.make_rng(3)
    dA, dB = 2, 3
    rho = linalg.random_ginibre(dA * dB, rng)
    u = linalg.random_unitary(dB, rng)
    expected = np.zeros_like(rho)
    for m in range(dB):
        k = np.kron(np.eye(dA), np.outer(u[:, m], u[:, m].conj()))
        expected += k @ rho @ k
    for kern in both:
        np.testing.assert_allclose(kern.project_local(rho, dA, dB, u, True), expected, atol=1e-14)
    u_a = linalg.random_unitary(dA, rng)
    expected = np.zeros_like(rho)
    for m in range(dA):
        k = np.kron(np.outer(u_a[:, m], u_a[:, m].conj()), np.eye(dB))
        expected += k @ rho @ k
    for kern in both:
        np.testing.assert_allclose(kern.project_local(rho, dA, dB, u_a, False), expected, atol=1e-14)


def test_env_var_forces_backend(monkeypatch):
    monkeypatch.setenv("COHLOSS_BACKEND", "python")
    assert _backend._select().NAME == "python"
    monkeypatch.setenv("COHLOSS_BACKEND", "cython")
    assert _backend._select().NAME == "cython"
    monkeypatch.setenv("COHLOSS_BACKEND", "fortran")
    with pytest.raises(ValueError):
        _backend._select()
