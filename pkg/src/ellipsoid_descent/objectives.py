"""Built-in test objectives with analytic gradients."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import linalg
from .errors import DimensionMismatch


@dataclass(frozen=True)
class Objective:
    name: str
    evaluate: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    dimension: Optional[int] = None  # None: any dimension
    minimizer: Optional[np.ndarray] = None

    def check_point(self, x):
        x = linalg.as_vector(x, "x")
        if self.dimension is not None and x.shape[0] != self.dimension:
            raise DimensionMismatch(f"{self.name} takes {self.dimension} coordinates, got {x.shape[0]}")
        return x


def sphere(n=None):
    """``0.5 |x|^2``."""
    return Objective(
        name="sphere",
        evaluate=lambda x: 0.5 * float(x @ x),
        gradient=lambda x: np.array(x, dtype=float),
        dimension=n,
        minimizer=None if n is None else np.zeros(n),
    )


def _rosen_f(x):
    return 100.0 * (x[1] - x[0] ** 2) ** 2 + (1.0 - x[0]) ** 2


def _rosen_g(x):
    t = x[1] - x[0] ** 2
    return np.array([-400.0 * x[0] * t - 2.0 * (1.0 - x[0]), 200.0 * t])


def rosenbrock():
    """Two-dimensional Rosenbrock valley, minimum 0 at ``(1, 1)``."""
    return Objective("rosenbrock", _rosen_f, _rosen_g, dimension=2, minimizer=np.ones(2))


def quadratic(q, b=None):
    """``0.5 x^T Q x + b^T x`` for SPD ``Q``; raises NotPositiveDefinite otherwise."""
    q = linalg.SpdMatrix(q)
    qa = q.array
    b = np.zeros(q.n) if b is None else linalg.as_vector(b, "b")
    if b.shape[0] != q.n:
        raise DimensionMismatch(f"Q is {q.n}x{q.n}, b has length {b.shape[0]}")
    return Objective(
        name="quadratic",
        evaluate=lambda x: 0.5 * float(x @ qa @ x) + float(b @ x),
        gradient=lambda x: qa @ x + b,
        dimension=q.n,
        minimizer=-linalg.solve_spd(q.factor, b),
    )


def builtin_objectives(q=None, b=None, n=2):
    """Catalog of the built-in objectives.

    ``q``/``b`` configure the quadratic (default ``diag(1, 10, 100, ...)``
    with ``b = 0``); ``n`` sizes the sphere and the default quadratic.
    """
    if q is None:
        q = np.diag(10.0 ** np.arange(n))
    return {
        "sphere": sphere(n),
        "rosenbrock": rosenbrock(),
        "quadratic": quadratic(q, b),
    }
