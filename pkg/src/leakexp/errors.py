"""Exception types shared across the package.

The CLI maps each class to a distinct process exit code, so library code
should raise the most specific one that applies.
"""

__all__ = [
    "InputParseError",
    "SizeLimitError",
    "DegenerateParameterError",
    "InvariantViolationError",
]


class InputParseError(ValueError):
    """Malformed user input: matrix file or channel descriptor."""


class SizeLimitError(ValueError):
    """Instance exceeds a documented enumeration limit."""


class DegenerateParameterError(ValueError):
    """Channel parameter outside the open region where the quantity is defined."""


class InvariantViolationError(RuntimeError):
    """A mathematical invariant that must hold was violated at runtime."""
