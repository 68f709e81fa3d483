"""Exception hierarchy shared by every module."""

from __future__ import annotations


class BelitskiiError(Exception):
    """Base class for all library errors."""


class MalformedScalar(BelitskiiError, ValueError):
    pass


class ZeroDenominator(MalformedScalar):
    pass


class MalformedInput(BelitskiiError, ValueError):
    pass


class Singular(BelitskiiError, ArithmeticError):
    pass


class SizeMismatch(BelitskiiError, ValueError):
    pass


class NotAnEigenvalue(BelitskiiError, ValueError):
    pass


class EigenvaluesNotInField(BelitskiiError, ArithmeticError):
    """The characteristic polynomial does not split over Q(i).

    ``residual`` holds the coefficients (highest degree first) of the factor
    that has no Gaussian-rational root.
    """

    def __init__(self, residual, message: str | None = None):
        self.residual = tuple(residual)
        if message is None:
            coeffs = ", ".join(str(c) for c in self.residual)
            message = f"characteristic polynomial does not split over Q(i); residual factor [{coeffs}]"
        super().__init__(message)


class EmptyStateSpace(BelitskiiError, ValueError):
    pass


class ParamsNotDistinct(BelitskiiError, ValueError):
    pass


class UnboundParam(BelitskiiError, KeyError):
    pass


class Unsupported(BelitskiiError, ValueError):
    pass


class ReductionError(BelitskiiError, RuntimeError):
    """An internal invariant of the reduction engine was violated."""


class NotIndecomposable(BelitskiiError, ValueError):
    """Raised when an operation that needs an indecomposable system gets a direct sum."""
