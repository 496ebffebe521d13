"""Exception types and the tagged infinity returned for unbounded entropies."""


class FermirelError(Exception):
    """Base class for all errors raised by this package."""


class CovarianceError(FermirelError, ValueError):
    """A matrix failed covariance-matrix validation.

    ``violations`` lists every failed constraint as ``(name, max_abs_residual)``.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NotHermitian(CovarianceError):
    pass


class SelfDualViolation(CovarianceError):
    pass


class InvalidDensity(FermirelError, ValueError):
    pass


class DegenerateKernel(FermirelError, ArithmeticError):
    pass


class SingularOccupation(FermirelError, ValueError):
    pass


class NotUnitarilyEquivalent(FermirelError, ValueError):
    pass


class DimensionTooLarge(FermirelError, ValueError):
    pass


class NotNormalized(FermirelError, ValueError):
    pass


class SupportViolation(FermirelError, ValueError):
    pass


class QuadratureNotConverged(FermirelError, ArithmeticError):
    def __init__(self, message, abserr=float("nan")):
        super().__init__(message)
        self.abserr = abserr


class GridTooCoarse(FermirelError, ValueError):
    pass


class InvalidRange(FermirelError, ValueError):
    pass


class ProfileError(FermirelError, ValueError):
    """Malformed profile input; ``line`` is the 1-based input line when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InfiniteEntropy(float):
    """``+inf`` carrying the reason the relative entropy diverges.

    Behaves as ``float('inf')`` in arithmetic and comparisons.
    """

    def __new__(cls, reason=""):
        obj = super().__new__(cls, float("inf"))
        obj.reason = reason
        return obj

    def __repr__(self):
        return f"InfiniteEntropy({self.reason!r})"
