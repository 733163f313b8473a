"""
Exception hierarchy for theta evaluation and identity checks.

Every error raised by the library derives from ThetaError so callers
(the CLI in particular) can map whole families to exit codes.
"""
from typing import Optional


class ThetaError(Exception):
    """Base class for all library errors."""


class DomainError(ThetaError):
    """Parameters fall outside the convergence domain."""


class OddParameterCount(DomainError):
    """N is odd: the series diverges in one direction of n."""


class NonPositiveLastImaginary(DomainError):
    """imag(tau_N) <= 0: the series diverges for large |n|."""


class TooManyParameters(DomainError):
    """N exceeds the exact-factorial limit."""


class RangeOverflow(ThetaError):
    """The certified truncation range exceeds the configured hard cap."""


class ComplexOffsetDivergence(ThetaError):
    """A complex offset pushes term magnitudes out of double range."""


class DimensionMismatch(ThetaError):
    """Operands carry different parameter counts."""


class DimensionTooSmall(ThetaError):
    """Operation needs more parameters than were supplied."""


class DegeneratePoint(ThetaError):
    """Every projective coordinate lies below the magnitude floor."""


class InvalidJob(ThetaError):
    """Malformed CLI input; names the offending field."""

    def __init__(self, field: str, message: str, cause: Optional[Exception] = None):
        self.field = field
        self.cause = cause
        super().__init__(f"{field}: {message}")
