"""Exception types shared across the package.

The CLI maps ValidationError to exit code 2 and ResourceLimitError to
exit code 3; everything else is a genuine bug.
"""


class FreelatError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(FreelatError, ValueError):
    """Bad input: malformed matrix, out-of-range parameter, zero vector, ..."""


class DimensionMismatchError(ValidationError):
    """Operands live in different ambient dimensions."""


class DegenerateHeightError(ValidationError):
    """Both points of a pair have height 1, so no balance ratio exists."""


class ResourceLimitError(FreelatError, RuntimeError):
    """An enumeration exceeded its configured size cap."""

    def __init__(self, message, count=None, cap=None):
        super().__init__(message)
        self.count = count
        self.cap = cap
