"""Exception types shared across the package."""


class CasimirCavityError(Exception):
    """Base class for all package-specific errors."""


class DomainError(CasimirCavityError, ValueError):
    """Input lies outside the mathematical domain of the operation."""


class PoleOnPath(CasimirCavityError, ValueError):
    """A summation or recurrence would hit a pole of the integrand/terms."""


class NoConvergence(CasimirCavityError, ArithmeticError):
    """Tolerance not reached within the allowed number of terms/modes.

    Carries the best available estimate so callers can inspect how far
    the evaluation got.
    """

    def __init__(self, message, best=None, error_estimate=None):
        super().__init__(message)
        self.best = best
        self.error_estimate = error_estimate


class ImaginaryResidue(CasimirCavityError, ArithmeticError):
    """A closed-form evaluation failed its realness assertion."""


class NoCrossing(CasimirCavityError, RuntimeError):
    """No sign change found in the scanned range."""
