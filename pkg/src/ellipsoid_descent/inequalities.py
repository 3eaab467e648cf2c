"""Numerical checks for the chain log bound -> AM-GM -> Young -> Hölder -> Cauchy-Schwarz.

Every ``check_*`` function evaluates both sides of one inequality and returns
an :class:`InequalityReport`. ``equality_predicted`` is the closed-form
equality condition evaluated on the inputs; ``equality_observed`` says the
two sides agree numerically.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, DomainError, InvalidExponent

EPS_REL = 1e-9
EPS_EQ = 1e-8
DEPENDENCE_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class InequalityReport:
    lhs: float
    rhs: float
    gap: float
    holds: bool
    equality_predicted: bool
    equality_observed: bool

    @property
    def scale(self):
        return max(1.0, abs(self.rhs))


def _report(lhs, rhs, predicted, rtol=EPS_REL):
    lhs = float(lhs)
    rhs = float(rhs)
    gap = rhs - lhs
    scale = max(1.0, abs(rhs))
    return InequalityReport(
        lhs=lhs,
        rhs=rhs,
        gap=gap,
        holds=gap >= -rtol * scale,
        equality_predicted=bool(predicted),
        equality_observed=abs(gap) <= EPS_EQ * scale,
    )


def _norm2(v):
    s = float(v @ v)
    if 1e-290 < s < 1e290:
        return math.sqrt(s)
    m = float(np.abs(v).max())
    if m == 0.0:
        return 0.0
    u = v / m
    return m * math.sqrt(float(u @ u))


def _same_length(x, y):
    if x.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"lengths differ: {x.shape[0]} vs {y.shape[0]}")


def _conjugate(p):
    if not (p > 1.0 and math.isfinite(p)):
        raise InvalidExponent(f"p must be a finite real > 1, got {p!r}")
    q = p / (p - 1.0)
    if not q > 1.0:
        raise InvalidExponent(f"p={p!r} too large for a usable conjugate exponent")
    return q


def weight_vector(entries):
    """Validate positive weights summing to one (within 1e-12)."""
    w = linalg.as_vector(entries, "weights")
    if not float(w.min()) > 0.0:
        raise DomainError("weights must be strictly positive")
    total = float(w.sum())
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise DomainError(f"weights sum to {total!r}, not 1")
    return w


def linearly_dependent(u, v):
    """True when one vector is zero or ``|u.v| >= (1 - 1e-10) |u| |v|``."""
    u = linalg.as_vector(u, "u")
    v = linalg.as_vector(v, "v")
    _same_length(u, v)
    nu = _norm2(u)
    nv = _norm2(v)
    if nu == 0.0 or nv == 0.0:
        return True
    return abs(float(u @ v)) >= (1.0 - DEPENDENCE_TOL) * nu * nv


def check_log_bound(x):
    """``ln(x) <= x - 1`` for ``x > 0``, equality at ``x = 1``."""
    x = float(x)
    if not (x > 0.0 and math.isfinite(x)):
        raise DomainError(f"log bound needs finite x > 0, got {x!r}")
    return _report(math.log(x), x - 1.0, abs(x - 1.0) <= 1e-9)


def check_weighted_am_gm(a, w):
    """Weighted geometric mean against weighted arithmetic mean.

    The geometric side is evaluated as ``exp(sum w_i ln a_i)``.
    """
    a = linalg.as_vector(a, "a")
    w = weight_vector(w)
    _same_length(a, w)
    if not float(a.min()) > 0.0:
        raise DomainError("AM-GM needs strictly positive a_i")
    lhs = math.exp(float(w @ np.log(a)))
    rhs = float(w @ a)
    a1 = float(a[0])
    predicted = float(np.max(np.abs(a - a1))) <= 1e-9 * max(1.0, a1)
    return _report(lhs, rhs, predicted)


def am_gm_log_ratio_sum(a, w):
    """``sum w_i ln(a_i / R)`` with ``R = sum w_i a_i``; never positive."""
    a = linalg.as_vector(a, "a")
    w = weight_vector(w)
    _same_length(a, w)
    r = float(w @ a)
    return float(w @ np.log(a / r))


def check_young(x, y, p):
    """``x y <= x^p / p + y^q / q`` with ``q = p / (p - 1)``, for ``x, y >= 0``."""
    x = float(x)
    y = float(y)
    if not (x >= 0.0 and y >= 0.0):
        raise DomainError(f"Young's inequality is checked for x, y >= 0, got {x!r}, {y!r}")
    if not (p > 1.0 and math.isfinite(p)):
        raise DomainError(f"p must be a finite real > 1, got {p!r}")
    q = _conjugate(p)
    xp = x**p
    yq = y**q
    predicted = abs(xp - yq) <= 1e-9 * max(1.0, xp)
    return _report(x * y, xp / p + yq / q, predicted)


def holder_termwise_bounds(x, y, p):
    """Per-coordinate Young bound used to prove Hölder.

    Returns ``(lhs, rhs)`` arrays with
    ``lhs_i = |x_i y_i| / (|x|_p |y|_q)`` and
    ``rhs_i = |x_i|^p / (p |x|_p^p) + |y_i|^q / (q |y|_q^q)``.
    Summing ``rhs`` gives 1. Both vectors must be nonzero.
    """
    x = linalg.as_vector(x, "x")
    y = linalg.as_vector(y, "y")
    _same_length(x, y)
    q = _conjugate(p)
    nx = linalg.p_norm(x, p)
    ny = linalg.p_norm(y, q)
    if nx == 0.0 or ny == 0.0:
        raise DomainError("termwise bounds need nonzero x and y")
    ux = np.abs(x) / nx
    uy = np.abs(y) / ny
    return ux * uy, ux**p / p + uy**q / q


def check_holder(x, y, p):
    """``|x.y| <= |x|_p |y|_q``.

    No equality condition is evaluated except at ``p == 2``, where the
    Cauchy-Schwarz dependence test applies.
    """
    x = linalg.as_vector(x, "x")
    y = linalg.as_vector(y, "y")
    _same_length(x, y)
    q = _conjugate(p)
    rhs = linalg.p_norm(x, p) * linalg.p_norm(y, q)
    predicted = p == 2.0 and linearly_dependent(x, y)
    return _report(abs(float(x @ y)), rhs, predicted)


def check_cauchy_schwarz(x, y):
    x = linalg.as_vector(x, "x")
    y = linalg.as_vector(y, "y")
    _same_length(x, y)
    return _report(abs(float(x @ y)), _norm2(x) * _norm2(y), linearly_dependent(x, y))


def check_transpose_spectral(a, rtol=EPS_EQ):
    """Compare the spectral norms of ``A^T`` (lhs) and ``A`` (rhs).

    Equality is always predicted; ``holds`` is two-sided agreement within
    ``rtol * max(1, rhs)``.
    """
    a = linalg.as_matrix(a)
    rhs = linalg.spectral_norm(a)
    lhs = linalg.spectral_norm(linalg.as_matrix(a.T))
    gap = rhs - lhs
    scale = max(1.0, rhs)
    return InequalityReport(
        lhs=lhs,
        rhs=rhs,
        gap=gap,
        holds=abs(gap) <= rtol * scale,
        equality_predicted=True,
        equality_observed=abs(gap) <= EPS_EQ * scale,
    )


def check_generalized_cs(a, x, y):
    """``|x.y| <= |x|_A |y|_{A^-1}`` for SPD ``A``.

    ``A^-1 y`` comes from the congruence factor, never an explicit inverse.
    Equality is predicted when ``x`` and ``A^-1 y`` are linearly dependent.
    """
    a = linalg.as_spd(a)
    x = linalg.as_vector(x, "x")
    y = linalg.as_vector(y, "y")
    _same_length(x, y)
    if x.shape[0] != a.n:
        raise DimensionMismatch(f"matrix is {a.n}x{a.n}, vectors have length {x.shape[0]}")
    ym = float(np.abs(y).max())
    if ym == 0.0:
        ainv_y, dual = y, 0.0
    else:
        # scaled so y^T A^-1 y cannot underflow
        unit = y / ym
        ainv_unit = linalg.solve_spd(a.factor, unit)
        ainv_y = ainv_unit * ym
        dual = ym * math.sqrt(max(0.0, float(unit @ ainv_unit)))
    rhs = linalg.ellipsoid_norm(a, x) * dual
    return _report(abs(float(x @ y)), rhs, linearly_dependent(x, ainv_y))
