"""Exception hierarchy shared by all modules."""


class TodaHeatError(Exception):
    """Base class for library errors."""


class DepthError(TodaHeatError):
    """A truncated series was asked for a coefficient below its valid depth."""


class IntervalError(TodaHeatError):
    """A coefficient sequence was needed outside the interval it is defined on."""

    def __init__(self, message, missing=None):
        super().__init__(message)
        self.missing = missing


class WindowTooNarrowError(IntervalError):
    """The finite window cannot support the requested order."""


class InconsistentSystemError(TodaHeatError):
    """An intertwining relation has no banded solution with the declared support."""

    def __init__(self, message, offset=None, index=None):
        super().__init__(message)
        self.offset = offset
        self.index = index


class SingularParametersError(TodaHeatError):
    """Darboux data with a vanishing Casorati determinant."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class FitFailure(TodaHeatError):
    """Heat coefficients are not odd polynomials of the required degree."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class StructureError(TodaHeatError):
    """Input violates a structural requirement (e.g. a polynomial is not odd)."""


class CapExceededError(TodaHeatError):
    """A numeric series needed more terms than the evaluator allows."""
