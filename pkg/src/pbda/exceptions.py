"""Exception types shared across the package."""


class PBDAError(Exception):
    """Base class for all package errors."""


class DomainError(PBDAError):
    """An argument lies outside the mathematical domain of a function."""


class DimensionError(PBDAError):
    """Incompatible or unsupported array dimensions."""


class ParseError(PBDAError):
    """Malformed input file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegenerateInput(PBDAError):
    """Input that makes a quantity undefined (e.g. a zero vector margin)."""


class DegenerateGradient(PBDAError):
    """The implicit-function gradient is undefined at this point.

    Raised when the bound value coincides with the empirical term, or
    either is at an endpoint of [0, 1].  Callers are expected to perturb
    the weights slightly and retry.
    """
