"""Exception hierarchy shared by every module of the package."""


class LQuotError(Exception):
    """Base class for all package errors."""


class PoleError(LQuotError, ArithmeticError):
    """Argument lies (within tolerance) on a pole of Gamma or a polygamma function."""


class DomainError(LQuotError, ValueError):
    """Input violates a documented precondition or type invariant."""


class NonFiniteError(LQuotError, ArithmeticError):
    """A NaN or infinity was produced or supplied."""


class TruncationError(LQuotError):
    """Not enough Dirichlet coefficients to reach the requested accuracy."""


class ZeroValueError(LQuotError, ArithmeticError):
    """L(f, s) is numerically zero, so its logarithmic derivative is undefined."""


class UnsupportedFamilyError(LQuotError):
    """The numeric engine does not cover this L-function family."""


class HypothesisError(LQuotError, ValueError):
    """Hypotheses needed for a certificate do not hold."""


class OutOfProvenRangeError(HypothesisError):
    """Parameters fall in a range the underlying argument does not cover."""


class PropertyAError(LQuotError, ValueError):
    """An integer set lacks property A."""


class FormatError(LQuotError, ValueError):
    """Malformed text input (coefficient files, records, expressions)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
