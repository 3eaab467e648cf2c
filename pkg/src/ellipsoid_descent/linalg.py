"""Small dense linear algebra on numpy arrays.

Vectors are plain read-only 1-D ``float64`` arrays produced by
:func:`as_vector`. :class:`SpdMatrix` validates symmetry and positive
definiteness on construction and caches its :class:`CongruenceFactor`, the
lower triangular ``L`` with ``A = L L^T``.
"""

import functools
import math

import numpy as np

from . import _backend
from .errors import DimensionMismatch, InvalidExponent, NoConvergence, NotPositiveDefinite

SYMMETRY_RTOL = 1e-12
PIVOT_DELTA = 1e-13
RECONSTRUCT_RTOL = 1e-10

POWER_RTOL = 1e-14
POWER_MAX_ITER = 10_000
POWER_SEED = 20_240_101


def _frozen(arr):
    arr.flags.writeable = False
    return arr


def _all_finite(arr):
    # a non-finite entry always makes the sum non-finite; overflow needs the slow check
    return math.isfinite(float(arr.sum())) or bool(np.isfinite(arr).all())


def as_vector(v, name="vector"):
    """Return ``v`` as a read-only contiguous float64 vector, checking finiteness."""
    if (
        isinstance(v, np.ndarray)
        and v.dtype == np.float64
        and v.ndim == 1
        and v.size
        and not v.flags.writeable
        and v.flags.c_contiguous
    ):
        return v
    arr = np.array(v, dtype=np.float64, copy=True, ndmin=1)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 1-D sequence")
    if not _all_finite(arr):
        raise ValueError(f"{name} has non-finite entries")
    return _frozen(arr)


def as_matrix(a, name="matrix"):
    arr = np.array(a, dtype=np.float64, copy=True, ndmin=2, order="C")
    if arr.ndim != 2 or 0 in arr.shape:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array")
    if not _all_finite(arr):
        raise ValueError(f"{name} has non-finite entries")
    return _frozen(arr)


class CongruenceFactor:
    """Lower triangular ``L`` with positive diagonal such that ``A = L L^T``.

    With ``P = L^{-T}`` this is the congruence ``P^T A P = I``.
    """

    __slots__ = ("lower",)

    def __init__(self, lower):
        self.lower = lower

    @property
    def n(self):
        return self.lower.shape[0]

    def reconstruct(self):
        return self.lower @ self.lower.T

    def __repr__(self):
        return f"CongruenceFactor(n={self.n})"


def _check_symmetric(a):
    worst, big = _backend.kernels.symmetry_defect(a)
    if worst > SYMMETRY_RTOL * max(1.0, big):
        raise NotPositiveDefinite("matrix is not symmetric")


def _factorize_array(a):
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {a.shape}")
    _check_symmetric(a)
    dmax = float(np.max(np.diag(a)))
    if not dmax > 0.0:
        raise NotPositiveDefinite("largest diagonal entry is not positive")
    lower, bad = _backend.kernels.cholesky(a, PIVOT_DELTA * dmax)
    if bad >= 0:
        raise NotPositiveDefinite(f"pivot {bad} at or below {PIVOT_DELTA:g} * max(diag)")
    return CongruenceFactor(_frozen(lower))


class SpdMatrix:
    """Symmetric positive definite matrix with its factor computed up front.

    Raises :class:`NotPositiveDefinite` if the input is not symmetric or the
    factorization meets a pivot at or below ``1e-13 * max(diag)``.
    """

    __slots__ = ("array", "factor")

    def __init__(self, a):
        if isinstance(a, SpdMatrix):
            self.array, self.factor = a.array, a.factor
            return
        arr = as_matrix(a)
        self.factor = _factorize_array(arr)
        self.array = arr

    @property
    def n(self):
        return self.array.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.array if dtype is None else self.array.astype(dtype)

    def __matmul__(self, other):
        return self.array @ other

    def __repr__(self):
        return f"SpdMatrix({self.array.tolist()!r})"

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n))


def as_spd(a):
    return a if isinstance(a, SpdMatrix) else SpdMatrix(a)


def factorize(a):
    """Return the :class:`CongruenceFactor` of an SPD matrix."""
    if isinstance(a, SpdMatrix):
        return a.factor
    return _factorize_array(as_matrix(a))


def solve_spd(factor, b):
    """Solve ``A x = b`` given ``factor = factorize(A)``."""
    b = as_vector(b, "b")
    if b.shape[0] != factor.n:
        raise DimensionMismatch(f"factor is {factor.n}x{factor.n}, b has length {b.shape[0]}")
    return _frozen(_backend.kernels.cho_solve(factor.lower, b))


def ellipsoid_norm(a, v):
    """``sqrt(v^T A v)`` for SPD ``A``, scaled by ``max |v_i|`` against under/overflow."""
    a = as_spd(a)
    v = as_vector(v)
    if v.shape[0] != a.n:
        raise DimensionMismatch(f"matrix is {a.n}x{a.n}, vector has length {v.shape[0]}")
    m = float(np.abs(v).max())
    if m == 0.0:
        return 0.0
    u = v / m
    return m * math.sqrt(max(0.0, float(u @ a.array @ u)))


def p_norm(v, p):
    """``(sum |v_i|^p)^(1/p)`` for ``p > 1``, scaled to avoid overflow."""
    if not (p > 1.0 and math.isfinite(p)):
        raise InvalidExponent(f"p must be a finite real > 1, got {p!r}")
    return _backend.kernels.p_norm(as_vector(v), float(p))


@functools.lru_cache(maxsize=64)
def _power_start(n):
    rng = np.random.default_rng([POWER_SEED, n])
    return _frozen(np.ones(n) + 0.5 * rng.uniform(-1.0, 1.0, n))


def spectral_norm(a):
    """Largest singular value by power iteration on ``A^T A``.

    Raises :class:`NoConvergence` if 10,000 iterations pass without two
    successive Rayleigh quotients agreeing to 1e-14 relative.
    """
    if not (
        isinstance(a, np.ndarray)
        and a.dtype == np.float64
        and a.ndim == 2
        and not a.flags.writeable
        and a.flags.c_contiguous
    ):
        a = as_matrix(a)
    lam, iters, converged = _backend.kernels.power_iteration_gram(
        a, _power_start(a.shape[1]), POWER_RTOL, POWER_MAX_ITER
    )
    if not converged:
        raise NoConvergence(f"power iteration did not settle in {iters} iterations")
    return math.sqrt(lam)
