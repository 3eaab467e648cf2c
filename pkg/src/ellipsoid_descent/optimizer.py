"""BFGS quasi-Newton and steepest descent with Armijo backtracking.

The quasi-Newton method keeps the Hessian approximation ``B_k`` itself
(starting from the identity), steps along ``-B_k^{-1} g_k`` and applies the
direct BFGS update, which enforces the secant equation ``B_{k+1} s_k = y_k``.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg
from .errors import CurvatureTooSmall, LineSearchFailed, NotDescentDirection, NotPositiveDefinite

log = logging.getLogger(__name__)

METHODS = ("quasi_newton", "steepest_descent")


@dataclass(frozen=True)
class OptimizerConfig:
    grad_tol: float = 1e-8
    max_iter: int = 500
    armijo_c: float = 1e-4
    backtrack_rho: float = 0.5
    max_backtracks: int = 60
    curvature_skip_tol: float = 1e-10

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not (isinstance(self.max_iter, int) and self.max_iter > 0):
            raise ValueError("max_iter must be a positive integer")
        if not 0 < self.armijo_c < 1:
            raise ValueError("armijo_c must lie in (0, 1)")
        if not 0 < self.backtrack_rho < 1:
            raise ValueError("backtrack_rho must lie in (0, 1)")
        if not (isinstance(self.max_backtracks, int) and self.max_backtracks > 0):
            raise ValueError("max_backtracks must be a positive integer")
        if not self.curvature_skip_tol > 0:
            raise ValueError("curvature_skip_tol must be positive")


@dataclass(frozen=True)
class IterationRecord:
    """State at ``x_k`` and the step taken from it.

    ``alpha``/``direction`` are None on the final record. ``hessian`` is the
    ``B_k`` that produced ``direction`` (quasi-Newton only);
    ``secant_residual`` is ``|B_{k+1} s_k - y_k|`` when the update ran.
    """

    k: int
    x: np.ndarray
    f: float
    grad_norm: float
    alpha: Optional[float] = None
    direction: Optional[np.ndarray] = None
    hessian: Optional[np.ndarray] = None
    secant_residual: Optional[float] = None
    skipped_update: Optional[str] = None
    gradient: Optional[np.ndarray] = None


@dataclass(frozen=True)
class OptTrace:
    method: str
    records: tuple
    termination: str
    config: OptimizerConfig = field(default_factory=OptimizerConfig)

    @property
    def final(self):
        return self.records[-1]

    @property
    def x(self):
        return self.final.x

    @property
    def iterations(self):
        """Number of accepted steps."""
        return len(self.records) - 1

    @property
    def converged(self):
        return self.termination == "converged"


def secant_residual(b, s, y):
    return float(np.linalg.norm(np.asarray(b) @ s - y))


def bfgs_update(b, s, y, curvature_skip_tol=1e-10):
    """Direct BFGS update ``B - B s s^T B / s^T B s + y y^T / y^T s``.

    Raises :class:`CurvatureTooSmall` when ``s^T y`` does not exceed
    ``curvature_skip_tol * |s| |y|``; the caller should keep ``B``.
    """
    b = linalg.as_spd(b)
    s = linalg.as_vector(s, "s")
    y = linalg.as_vector(y, "y")
    sy = float(s @ y)
    if not sy > curvature_skip_tol * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
        raise CurvatureTooSmall(f"s^T y = {sy:.3e} is too small for an SPD update")
    bs = b.array @ s
    new = b.array - np.outer(bs, bs) / float(s @ bs) + np.outer(y, y) / sy
    return linalg.SpdMatrix(0.5 * (new + new.T))


def backtracking_line_search(obj, x, d, g, cfg=OptimizerConfig(), fx=None):
    """Largest ``alpha`` in ``1, rho, rho^2, ...`` meeting the Armijo condition.

    The trial value must also be strictly below ``f(x)``: once the predicted
    decrease drops under the rounding of ``f``, Armijo alone would accept a
    step that changes nothing and the iteration would stall.
    """
    slope = float(g @ d)
    if not slope < 0.0:
        raise NotDescentDirection(f"g^T d = {slope!r} is not negative")
    if fx is None:
        fx = obj.evaluate(x)
    alpha = 1.0
    for _ in range(cfg.max_backtracks + 1):
        ft = obj.evaluate(x + alpha * d)
        if ft < fx and ft <= fx + cfg.armijo_c * alpha * slope:
            return alpha
        alpha *= cfg.backtrack_rho
    raise LineSearchFailed(f"no Armijo step after {cfg.max_backtracks} backtracks")


def finite_diff_grad(obj, x, h=1e-6):
    """Central-difference gradient."""
    if not h > 0:
        raise ValueError("h must be positive")
    x = np.array(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        grad[i] = (obj.evaluate(x + e) - obj.evaluate(x - e)) / (2.0 * h)
    return grad


def minimize(obj, x0, method="quasi_newton", cfg=OptimizerConfig()):
    """Run ``method`` from ``x0`` until ``|g| <= grad_tol`` or ``max_iter`` steps.

    A failed line search raises :class:`LineSearchFailed` carrying the
    partial trace in ``.trace``.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    quasi = method == "quasi_newton"
    x = np.array(obj.check_point(x0))
    n = x.shape[0]
    b = linalg.SpdMatrix.identity(n) if quasi else None
    fx = float(obj.evaluate(x))
    g = np.asarray(obj.gradient(x), dtype=float)
    records = []

    for k in range(cfg.max_iter + 1):
        gnorm = float(np.linalg.norm(g))
        if gnorm <= cfg.grad_tol or k == cfg.max_iter:
            records.append(IterationRecord(k=k, x=x, f=fx, grad_norm=gnorm, gradient=g))
            reason = "converged" if gnorm <= cfg.grad_tol else "max_iter"
            return OptTrace(method, tuple(records), reason, cfg)

        d = -linalg.solve_spd(b.factor, g) if quasi else -g
        try:
            alpha = backtracking_line_search(obj, x, d, g, cfg, fx)
        except (LineSearchFailed, NotDescentDirection) as exc:
            records.append(IterationRecord(k=k, x=x, f=fx, grad_norm=gnorm, direction=d,
                                           hessian=None if b is None else b.array, gradient=g))
            trace = OptTrace(method, tuple(records), "line_search_failed", cfg)
            raise LineSearchFailed(f"iteration {k}: {exc}", trace) from exc

        x_new = x + alpha * d
        f_new = float(obj.evaluate(x_new))
        g_new = np.asarray(obj.gradient(x_new), dtype=float)
        residual = skipped = None
        b_used = None
        if quasi:
            b_used = b.array
            s = x_new - x
            y = g_new - g
            try:
                b_next = bfgs_update(b, s, y, cfg.curvature_skip_tol)
            except CurvatureTooSmall:
                skipped = "curvature"
            except NotPositiveDefinite:
                skipped = "not_spd"
                log.warning("iteration %d: BFGS update lost positive definiteness; kept B", k)
            else:
                residual = secant_residual(b_next.array, s, y)
                b = b_next
        records.append(IterationRecord(k=k, x=x, f=fx, grad_norm=gnorm, alpha=alpha, direction=d,
                                       hessian=b_used, secant_residual=residual,
                                       skipped_update=skipped, gradient=g))
        x, fx, g = x_new, f_new, g_new
    raise AssertionError("unreachable")
