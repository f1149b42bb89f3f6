"""
Exception hierarchy for the calculus engine.

Every failure raised by library code derives from ``EpscalcError`` so the
command-line layer can map it to exit code 2. Verification operations do
not raise for failed checks; they return reports with ``passed`` flags.
"""

from typing import Iterable, Optional


class EpscalcError(Exception):
    """Base class for all engine errors."""


class ConfigError(EpscalcError):
    """Invalid configuration value or environment override."""


class DomainError(EpscalcError, ValueError):
    """
    Argument outside the domain of an operation.

    Args:
        message: Human-readable description
        location: Optional printed subexpression where the error arose
    """

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)


class BaseMismatchError(EpscalcError, ValueError):
    """Two jets combined at different base points."""


class NotInvertibleError(EpscalcError):
    """Inverse rule applied to a jet with zero slope."""


class ConvergenceError(EpscalcError):
    """Bisection or panel refinement exhausted its cap."""


class PreconditionError(EpscalcError):
    """Hypothesis of a mean-value or L'Hopital operation is violated."""


class CertificationError(EpscalcError):
    """
    Grid certification found a violation.

    Attributes:
        eps: Offending grid point
        value: Sampled value at that point (may be NaN)
    """

    def __init__(self, message: str, eps: float, value: float):
        self.eps = eps
        self.value = value
        super().__init__(f"{message} at eps={eps!r} (value={value!r})")


class CertificationRequiredError(EpscalcError):
    """An operation needs an Analytic certificate that is not available."""


class ParseError(EpscalcError, ValueError):
    """
    Syntax error in an expression.

    Attributes:
        offset: Byte offset into the source where parsing failed
        expected: Set of token descriptions that would have been accepted
    """

    def __init__(self, message: str, offset: int, expected: Iterable[str] = ()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")
