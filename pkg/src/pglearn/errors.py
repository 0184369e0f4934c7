"""Exception types shared across the package."""


class PGLearnError(Exception):
    """Base class for all package-specific errors."""


class DataError(PGLearnError):
    """Malformed or inconsistent input data (files, shapes, index bases)."""


class GenerationError(PGLearnError):
    """A random generator could not produce a valid sample."""


class ZeroCurvatureError(PGLearnError):
    """The QP Hessian has a zero diagonal entry; the explicit water-filling
    formula would divide by it. Use the projected-gradient solver instead."""


class UnboundedLevelError(PGLearnError):
    """A scalar water-level equation has no solution; the corresponding
    equality constraint cannot be met for any value of its multiplier."""


class NotConvergedError(PGLearnError):
    """An iterative solver hit its iteration cap before meeting tolerances.

    Attributes
    ----------
    result : object or None
        The partial solver result, when available, so callers can inspect
        residuals.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
