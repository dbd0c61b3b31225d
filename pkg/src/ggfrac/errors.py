"""Exception types shared across the package."""


class GgfError(Exception):
    """Base class for all package errors."""


class DomainError(GgfError, ValueError):
    """Arguments outside the documented domain of an operation."""


class ConvergenceError(GgfError, ArithmeticError):
    """A series or quadrature did not reach its tolerance."""

    def __init__(self, message, *, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class DivergenceError(GgfError, ArithmeticError):
    """Evaluation at a point where the function is infinite."""

    def __init__(self, message, behavior=None):
        super().__init__(message)
        self.behavior = behavior
