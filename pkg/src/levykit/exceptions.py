"""Exception hierarchy shared by all levykit modules."""


class LevyKitError(Exception):
    """Base class for every error raised by levykit."""


class InvalidTriplet(LevyKitError, ValueError):
    pass


class InvalidMeasure(LevyKitError, ValueError):
    pass


class NonConvergedQuadrature(LevyKitError, ArithmeticError):
    """Adaptive quadrature missed its tolerance within the refinement budget."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class NegativePower(LevyKitError, ValueError):
    pass


class ZeroScale(LevyKitError, ValueError):
    pass


class NotLevyMixture(LevyKitError, ValueError):
    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic


class NonPositiveRadius(LevyKitError, ValueError):
    pass


class AlphaOutOfRange(LevyKitError, ValueError):
    pass


class ExistenceFailed(LevyKitError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotInIDAlpha(LevyKitError, ValueError):
    pass


class BranchJump(LevyKitError, ArithmeticError):
    pass


class IllConditionedInversion(LevyKitError, ArithmeticError):
    pass


class InversionDiverged(LevyKitError, ArithmeticError):
    pass


class ConsistencyError(LevyKitError, ArithmeticError):
    """Two computation routes for the same quantity disagree."""


class EmptyJumpDistribution(LevyKitError, ValueError):
    pass


class GridTooCoarse(LevyKitError, ValueError):
    pass


class EmptyBatch(LevyKitError, ValueError):
    pass
