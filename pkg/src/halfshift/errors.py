"""Exception types shared across the package."""


class SizeLimitError(ValueError):
    """A requested problem size exceeds the configured maximum."""


class FamilyMismatchError(ValueError):
    """An operation requires the quarter-band DPSS family and got other parameters."""


class HorizonExceededError(RuntimeError):
    """A truncated summation could not certify the requested tolerance within its cap."""


class NumericalFaultError(ArithmeticError):
    """An internal consistency check failed; indicates a numerical breakdown, not bad input."""
