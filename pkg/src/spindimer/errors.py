"""Exception hierarchy shared by every module of the package."""


class SpinDimerError(Exception):
    """Base class for all package errors."""


class NonHermitian(SpinDimerError, ValueError):
    pass


class DegenerateCoupling(SpinDimerError, ValueError):
    """A driven scenario was requested for a sector with zero transverse coupling."""


class CotangentSingularity(SpinDimerError, ArithmeticError):
    """The engineered longitudinal field diverges at the reported time."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class QuadratureFailure(SpinDimerError, ArithmeticError):
    pass


class TimeMismatch(SpinDimerError, ValueError):
    pass


class ScheduleInfeasible(SpinDimerError, ValueError):
    """Base for schedule requests that cannot be realised exactly."""


class InvalidEqualOmega(ScheduleInfeasible):
    pass


class UnsolvedSector(ScheduleInfeasible):
    """The schedule leaves a populated parity sector without a closed form."""


class ZeroGFactor(SpinDimerError, ValueError):
    pass


class IntegrationError(SpinDimerError, RuntimeError):
    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class StepLimitExceeded(IntegrationError):
    pass


class ToleranceUnreachable(IntegrationError):
    pass
