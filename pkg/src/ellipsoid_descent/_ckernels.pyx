# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernels: Cholesky, SPD solve, power iteration on A^T A,
symmetry scan and scaled p-norm.

Signatures mirror ``_pykernels`` exactly; ``_backend`` picks one at import.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, pow

cnp.import_array()


def cholesky(const double[:, ::1] a, double pivot_floor):
    """Lower factor of ``a``; returns ``(L, bad)`` with ``bad = -1`` on success.

    ``bad`` is the column whose pivot fell to or below ``pivot_floor``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double s, d
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] L = out
    for j in range(n):
        s = a[j, j]
        for k in range(j):
            s -= L[j, k] * L[j, k]
        if not s > pivot_floor:
            return out, j
        d = sqrt(s)
        L[j, j] = d
        for i in range(j + 1, n):
            s = a[i, j]
            for k in range(j):
                s -= L[i, k] * L[j, k]
            L[i, j] = s / d
    return out, -1


def cho_solve(const double[:, ::1] L, const double[::1] b):
    """Solve ``L L^T x = b`` by forward then backward substitution."""
    cdef Py_ssize_t n = L.shape[0]
    cdef Py_ssize_t i, k
    cdef double s
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] x = out
    for i in range(n):
        s = b[i]
        for k in range(i):
            s -= L[i, k] * x[k]
        x[i] = s / L[i, i]
    for i in range(n - 1, -1, -1):
        s = x[i]
        for k in range(i + 1, n):
            s -= L[k, i] * x[k]
        x[i] = s / L[i, i]
    return out


def lower_t_matvec(const double[:, ::1] L, const double[::1] v):
    """Return ``L^T v``."""
    cdef Py_ssize_t n = L.shape[0]
    cdef Py_ssize_t i, k
    cdef double s
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] w = out
    for i in range(n):
        s = 0.0
        for k in range(i, n):
            s += L[k, i] * v[k]
        w[i] = s
    return out


def power_iteration_gram(const double[:, ::1] a, const double[::1] x0,
                         double rtol, long max_iter):
    """Dominant eigenvalue of ``a^T a`` by power iteration.

    Stops once successive Rayleigh quotients differ by less than
    ``rtol`` relative. Returns ``(eigenvalue, iterations, converged)``.
    """
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t i, j
    cdef long it
    cdef double s, nrm, lam = 0.0, lam_prev = -1.0
    cdef double[::1] x = np.array(x0, dtype=np.float64)
    cdef double[::1] ax = np.empty(m, dtype=np.float64)
    cdef double[::1] y = np.empty(n, dtype=np.float64)

    nrm = 0.0
    for j in range(n):
        nrm += x[j] * x[j]
    nrm = sqrt(nrm)
    if nrm == 0.0:
        return 0.0, 0, False
    for j in range(n):
        x[j] /= nrm

    for it in range(1, max_iter + 1):
        for i in range(m):
            s = 0.0
            for j in range(n):
                s += a[i, j] * x[j]
            ax[i] = s
        # x has unit norm, so the Rayleigh quotient is |Ax|^2
        lam = 0.0
        for i in range(m):
            lam += ax[i] * ax[i]
        for j in range(n):
            s = 0.0
            for i in range(m):
                s += a[i, j] * ax[i]
            y[j] = s
        if lam == 0.0:
            return 0.0, it, True
        if it > 1 and fabs(lam - lam_prev) < rtol * lam:
            return lam, it, True
        lam_prev = lam
        nrm = 0.0
        for j in range(n):
            nrm += y[j] * y[j]
        nrm = sqrt(nrm)
        if nrm == 0.0:
            return 0.0, it, True
        for j in range(n):
            x[j] = y[j] / nrm
    return lam, max_iter, False


def symmetry_defect(const double[:, ::1] a):
    """Return ``(max |a_ij - a_ji|, max |a_ij|)``."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    cdef double d, big = 0.0, worst = 0.0
    for i in range(n):
        for j in range(a.shape[1]):
            d = fabs(a[i, j])
            if d > big:
                big = d
            if j < i:
                d = fabs(a[i, j] - a[j, i])
                if d > worst:
                    worst = d
    return worst, big


def p_norm(const double[::1] v, double p):
    """``(sum |v_i|^p)^(1/p)`` computed as ``m * (sum (|v_i|/m)^p)^(1/p)``."""
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i
    cdef double m = 0.0, s = 0.0, t
    for i in range(n):
        t = fabs(v[i])
        if t > m:
            m = t
    if m == 0.0:
        return 0.0
    for i in range(n):
        s += pow(fabs(v[i]) / m, p)
    return m * pow(s, 1.0 / p)
