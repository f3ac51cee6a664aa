"""Exception types raised across the package."""


class RcptError(Exception):
    """Base class for all package errors."""


class InvalidDimension(RcptError, ValueError):
    pass


class InvalidOperator(RcptError, ValueError):
    pass


class InvalidSubsystem(RcptError, ValueError):
    pass


class InvalidSpec(RcptError, ValueError):
    pass


class InvalidAngle(InvalidSpec):
    pass


class WrongStatistics(RcptError, ValueError):
    pass


class UnsupportedMultibath(RcptError, ValueError):
    pass


class QuadratureFailure(RcptError, RuntimeError):
    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (residual estimate {residual:.3e})")
        self.residual = residual


class SeriesTruncationFailure(RcptError, RuntimeError):
    pass


class TruncationFailure(RcptError, RuntimeError):
    pass


class SizeLimit(RcptError, MemoryError):
    pass


class NonUniqueSteadyState(RcptError, RuntimeError):
    def __init__(self, message, nullity=None):
        super().__init__(message)
        self.nullity = nullity


class StiffnessFailure(RcptError, RuntimeError):
    pass


class UndefinedEfficiency(RcptError, ValueError):
    """Raised when the device does not act as a heat engine (P <= 0 or Q <= 0)."""


class ConfigError(RcptError, ValueError):
    pass
