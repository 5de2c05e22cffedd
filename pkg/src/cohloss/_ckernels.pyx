# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: cyclic Jacobi eigensolver and the local projective channel.

Must stay numerically interchangeable with ``_pykernels``; the test suite
runs both against each other.
"""
import numpy as np

from libc.math cimport sqrt, fabs

NAME = "cython"


cdef double _off_norm(double complex[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t p, q
    cdef double acc = 0.0
    cdef double complex z
    for p in range(n):
        for q in range(n):
            if p != q:
                z = a[p, q]
                acc += z.real * z.real + z.imag * z.imag
    return sqrt(acc)


def jacobi_eigh(a_in, double tol, int max_sweeps):
    """Return ``(eigenvalues, eigenvectors, sweeps, off_norm)``, unsorted."""
    cdef double complex[:, ::1] a = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double off, r, app, aqq, theta, t, c, s
    cdef double complex apq, e, ce, xp, xq

    with nogil:
        # Hermitian input: force a real diagonal and a consistent lower triangle.
        for p in range(n):
            a[p, p] = a[p, p].real
            for q in range(p + 1, n):
                a[q, p] = a[p, q].real - 1j * a[p, q].imag

        off = _off_norm(a, n)
        while off >= tol and sweep < max_sweeps:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    r = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                    if r < 1e-300:
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    e = apq / r
                    ce = e.real - 1j * e.imag
                    app = a[p, p].real
                    aqq = a[q, q].real
                    theta = (aqq - app) / (2.0 * r)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        if k == p or k == q:
                            continue
                        xp = a[k, p]
                        xq = a[k, q]
                        a[k, p] = c * xp - s * ce * xq
                        a[k, q] = s * xp + c * ce * xq
                        a[p, k] = a[k, p].real - 1j * a[k, p].imag
                        a[q, k] = a[k, q].real - 1j * a[k, q].imag
                    a[p, p] = app - t * r
                    a[q, q] = aqq + t * r
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        xp = v[k, p]
                        xq = v[k, q]
                        v[k, p] = c * xp - s * ce * xq
                        v[k, q] = s * xp + c * ce * xq
            sweep += 1
            off = _off_norm(a, n)

    w = np.empty(n, dtype=np.float64)
    for p in range(n):
        w[p] = a[p, p].real
    return w, v_arr, sweep, off


def project_local(rho_in, Py_ssize_t d_a, Py_ssize_t d_b, u_in, bint side_b):
    """Sum of projector sandwiches over the columns of ``u`` on one subsystem."""
    cdef const double complex[:, ::1] rho = np.ascontiguousarray(rho_in, dtype=np.complex128)
    cdef const double complex[:, ::1] u = np.ascontiguousarray(u_in, dtype=np.complex128)
    cdef Py_ssize_t n = d_a * d_b
    out_arr = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    # d_keep: untouched subsystem, d_meas: measured subsystem
    cdef Py_ssize_t d_keep = d_a if side_b else d_b
    cdef Py_ssize_t d_meas = d_b if side_b else d_a
    w_arr = np.empty((d_keep, d_keep), dtype=np.complex128)
    cdef double complex[:, ::1] w = w_arr
    cdef Py_ssize_t m, x, y, j, l, row, col
    cdef double complex acc, lj, ll

    with nogil:
        for m in range(d_meas):
            # w[x, y] = <lambda_m| rho_{x., y.} |lambda_m>
            for x in range(d_keep):
                for y in range(d_keep):
                    acc = 0.0
                    for j in range(d_meas):
                        lj = u[j, m].real - 1j * u[j, m].imag
                        for l in range(d_meas):
                            if side_b:
                                row = x * d_b + j
                                col = y * d_b + l
                            else:
                                row = j * d_b + x
                                col = l * d_b + y
                            acc = acc + lj * rho[row, col] * u[l, m]
                    w[x, y] = acc
            for x in range(d_keep):
                for j in range(d_meas):
                    lj = u[j, m]
                    for y in range(d_keep):
                        for l in range(d_meas):
                            ll = u[l, m].real - 1j * u[l, m].imag
                            if side_b:
                                row = x * d_b + j
                                col = y * d_b + l
                            else:
                                row = j * d_b + x
                                col = l * d_b + y
                            out[row, col] = out[row, col] + lj * w[x, y] * ll
    return out_arr
