"""Exception types raised across the package."""


class EllipsoidDescentError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(EllipsoidDescentError, ValueError):
    pass


class NotPositiveDefinite(EllipsoidDescentError, ValueError):
    pass


class InvalidExponent(EllipsoidDescentError, ValueError):
    pass


class DomainError(EllipsoidDescentError, ValueError):
    pass


class NoConvergence(EllipsoidDescentError, ArithmeticError):
    pass


class ZeroGradient(EllipsoidDescentError, ValueError):
    pass


class CurvatureTooSmall(EllipsoidDescentError, ArithmeticError):
    """Raised by the BFGS update when s^T y is too small; skip the update."""


class NotDescentDirection(EllipsoidDescentError, ValueError):
    pass


class LineSearchFailed(EllipsoidDescentError, ArithmeticError):
    """Backtracking exhausted its budget.

    ``trace`` holds the partial optimization trace when raised from
    :func:`ellipsoid_descent.optimizer.minimize`.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
