"""Exception types shared across the package."""


class SinefoldError(Exception):
    """Base class for all package errors."""


class DomainError(SinefoldError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ResourceError(SinefoldError):
    """Requested size exceeds a configured cost cap."""


class NumericRangeError(SinefoldError, ArithmeticError):
    """Floating point overflow while evaluating an identity."""


class PrecisionError(SinefoldError):
    """Working precision too small for the requested computation."""


class SearchFailure(SinefoldError):
    """Global maximum search could not bracket a maximum."""
