"""Exception hierarchy shared by every module of the package."""


class ParamResError(Exception):
    """Base class for all errors raised by paramres."""


class InvalidParameter(ParamResError, ValueError):
    pass


class UndefinedRatio(InvalidParameter):
    """r = eps_bar / h requested while h == 0."""


class NumericalFailure(ParamResError):
    """Base class for failures of a numerical procedure (CLI exit code 3)."""


class IntegrationFailure(NumericalFailure):
    pass


class UnitarityViolation(NumericalFailure):
    pass


class QuadratureNonConvergence(NumericalFailure):
    pass


class FitError(NumericalFailure):
    pass


class InsufficientPoints(FitError):
    pass


class DegenerateFit(FitError):
    pass


class NoCrossing(NumericalFailure):
    pass
