"""Exception hierarchy shared by every module."""


class EigencurveError(Exception):
    """Base class for all errors raised by this package."""


class AsymmetricInput(EigencurveError, ValueError):
    pass


class NotPositiveDefinite(EigencurveError, ValueError):
    def __init__(self, message, which=None):
        super().__init__(message)
        self.which = which


class NoConvergence(EigencurveError, RuntimeError):
    pass


class DependentBasis(EigencurveError, ValueError):
    pass


class InvalidCoefficient(EigencurveError, ValueError):
    pass


class NotAnEigenpoint(EigencurveError, ValueError):
    pass


class LevelTooCloseToSpectrum(EigencurveError, ValueError):
    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class GridTooNarrow(EigencurveError, ValueError):
    def __init__(self, message, level=None, curve=None):
        super().__init__(message)
        self.level = level
        self.curve = curve
