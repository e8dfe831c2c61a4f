"""Exception types raised across the package."""


class ABRingError(Exception):
    """Base class for all abring errors."""


class NonPropagatingMode(ABRingError, ValueError):
    """Momentum outside the open interval (0, pi)."""


class SolveFailure(ABRingError, ArithmeticError):
    """The scattering system could not be solved to tolerance."""


class SingularPoint(ABRingError, ZeroDivisionError):
    """A closed-form denominator vanishes at the requested parameters."""


class InfiniteQ(ABRingError, ValueError):
    """The Fano asymmetry parameter diverges (flux phase equal to pi)."""


class EmptyResult(ABRingError, ValueError):
    """A lineshape analysis found nothing to report (e.g. a flat curve)."""


class FitDiverged(ABRingError, RuntimeError):
    """No Fano fit start converged to an acceptable residual."""
