"""Pure numpy fallback for the compiled kernels in ``_ckernels.pyx``."""

import math

import numpy as np


def cholesky(a, pivot_floor):
    n = a.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        row = L[j, :j]
        s = a[j, j] - row @ row
        if not s > pivot_floor:
            return L, j
        d = math.sqrt(s)
        L[j, j] = d
        if j + 1 < n:
            L[j + 1:, j] = (a[j + 1:, j] - L[j + 1:, :j] @ row) / d
    return L, -1


def cho_solve(L, b):
    n = L.shape[0]
    x = np.empty(n)
    for i in range(n):
        x[i] = (b[i] - L[i, :i] @ x[:i]) / L[i, i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
    return x


def lower_t_matvec(L, v):
    return L.T @ v


def power_iteration_gram(a, x0, rtol, max_iter):
    x = np.array(x0, dtype=np.float64)
    nrm = math.sqrt(x @ x)
    if nrm == 0.0:
        return 0.0, 0, False
    x /= nrm
    at = a.T
    lam = lam_prev = 0.0
    for it in range(1, max_iter + 1):
        ax = a @ x
        lam = float(ax @ ax)
        y = at @ ax
        if lam == 0.0:
            return 0.0, it, True
        if it > 1 and abs(lam - lam_prev) < rtol * lam:
            return lam, it, True
        lam_prev = lam
        nrm = math.sqrt(y @ y)
        if nrm == 0.0:
            return 0.0, it, True
        x = y / nrm
    return lam, max_iter, False


def symmetry_defect(a):
    return float(np.max(np.abs(a - a.T))), float(np.max(np.abs(a)))


def p_norm(v, p):
    v = np.abs(v)
    m = float(np.max(v))
    if m == 0.0:
        return 0.0
    return m * float(np.sum((v / m) ** p)) ** (1.0 / p)
