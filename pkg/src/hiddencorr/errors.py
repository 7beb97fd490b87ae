"""Exception types raised across the package."""


class HiddenCorrError(Exception):
    """Base class for all package errors."""


class NotHermitian(HiddenCorrError, ValueError):
    pass


class DimensionMismatch(HiddenCorrError, ValueError):
    pass


class EmptyKeepSet(HiddenCorrError, ValueError):
    pass


class InvalidDensityMatrix(HiddenCorrError, ValueError):
    pass


class InvalidProbabilityTable(HiddenCorrError, ValueError):
    pass


class IncompleteBasis(HiddenCorrError, ValueError):
    pass


class InvalidDistribution(HiddenCorrError, ValueError):
    pass


class ParameterOutOfRange(HiddenCorrError, ValueError):
    pass


class UnsupportedDimension(HiddenCorrError, ValueError):
    pass


class EmptyInput(HiddenCorrError, ValueError):
    pass


class StateFileError(HiddenCorrError, ValueError):
    """A state file failed to parse; the message names the first violated rule."""


class BoundViolation(HiddenCorrError, RuntimeError):
    """An inequality that must hold for every state was violated.

    This always indicates a bug, never bad input.
    """
