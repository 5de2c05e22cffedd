"""Pure-numpy fallback for the compiled kernels in ``_ckernels.pyx``.

Same algorithms, same call signatures; selected at import when the
extension is missing or when ``COHLOSS_BACKEND=python``.
"""
import math

import numpy as np

NAME = "python"

# below this a pivot is flushed to zero; dividing by it would overflow
_TINY = 1e-300


def _off_norm(a):
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return math.sqrt(float(np.sum(off.real ** 2 + off.imag ** 2)))


def jacobi_eigh(a_in, tol, max_sweeps):
    """Return ``(eigenvalues, eigenvectors, sweeps, off_norm)``, unsorted."""
    a = np.array(a_in, dtype=np.complex128, copy=True)
    n = a.shape[0]
    upper = np.triu(a, 1)
    a = upper + upper.conj().T + np.diag(np.diag(a).real)
    v = np.eye(n, dtype=np.complex128)

    sweep = 0
    off = _off_norm(a)
    while off >= tol and sweep < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < _TINY:
                    a[p, q] = a[q, p] = 0.0
                    continue
                ce = (apq / r).conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q]
                new_p = c * col_p - s * ce * col_q
                new_q = s * col_p + c * ce * col_q
                a[:, p] = new_p
                a[:, q] = new_q
                a[p, :] = new_p.conj()
                a[q, :] = new_q.conj()
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = 0.0
                a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * ce * vq
                v[:, q] = s * vp + c * ce * vq
        sweep += 1
        off = _off_norm(a)

    return np.diag(a).real.copy(), v, sweep, off


def project_local(rho_in, d_a, d_b, u_in, side_b):
    """Sum of projector sandwiches over the columns of ``u`` on one subsystem."""
    r = np.asarray(rho_in, dtype=np.complex128).reshape(d_a, d_b, d_a, d_b)
    u = np.asarray(u_in, dtype=np.complex128)
    if side_b:
        w = np.einsum("jm,xjyl,lm->mxy", u.conj(), r, u)
        out = np.einsum("jm,mxy,lm->xjyl", u, w, u.conj())
    else:
        w = np.einsum("jm,jxly,lm->mxy", u.conj(), r, u)
        out = np.einsum("jm,mxy,lm->jxly", u, w, u.conj())
    return out.reshape(d_a * d_b, d_a * d_b)
