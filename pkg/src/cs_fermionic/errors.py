"""Exception hierarchy for the exact algebra kernels."""

from typing import Any, Optional


class CSAlgebraError(Exception):
    """Base class for algebraic failures raised by this package."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class NonzeroRemainder(CSAlgebraError):
    """Raised when an exact division leaves a remainder."""


class WindowTooNarrow(CSAlgebraError):
    """Raised when a coefficient outside the exact window of a series is requested.

    Attributes:
        needed: Truncation depth that would make the request exact, if known.
        window: The (lo, hi) window of the offending series.
    """

    def __init__(
        self,
        message: str,
        needed: Optional[int] = None,
        window: Optional[tuple[Optional[int], Optional[int]]] = None,
    ):
        super().__init__(message, {"needed": needed, "window": window})
        self.needed = needed
        self.window = window


class WindowBudgetExceeded(CSAlgebraError):
    """Raised when window widening gives up."""

    def __init__(self, message: str, last_error: Optional[Exception] = None):
        super().__init__(message)
        self.last_error = last_error


class NotSymmetric(CSAlgebraError):
    """Raised when a polynomial expected to be symmetric is not."""


class NotAntisymmetric(CSAlgebraError):
    """Raised when a polynomial expected to be antisymmetric is not."""


class PartitionTooLong(CSAlgebraError):
    """Raised when a partition has more parts than the cut allows."""


class ParseError(CSAlgebraError):
    """Raised on malformed polynomial or operator literals."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}", {"position": position})
        self.position = position


class UnknownSuite(CSAlgebraError):
    """Raised when a verification suite name is not in the catalog."""


class UsageError(Exception):
    """Raised on command-line arguments the commands cannot act on."""
