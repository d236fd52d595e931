"""Exception types raised across the package."""


class RatModuliError(ValueError):
    """Base class for all package errors."""


class ZeroForm(RatModuliError):
    pass


class EmptyInput(RatModuliError):
    pass


class NotTraceless(RatModuliError):
    pass


class DegenerateTriple(RatModuliError):
    pass


class DegenerateQuadruple(RatModuliError):
    pass


class ForbiddenValue(RatModuliError):
    pass


class DegenerateMap(RatModuliError):
    """The two binary forms share a root, so the map drops degree."""


class NotOpenStratum(RatModuliError):
    pass


class NearDegenerate(RatModuliError):
    """Critical clusters are too close together to pair reliably."""


class IllConditioned(RatModuliError):
    pass


class NotGeneric(RatModuliError):
    pass


class OnResultantLocus(RatModuliError):
    pass


class ChartSingular(RatModuliError):
    pass


class SolveFailed(RatModuliError):
    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class ParseError(RatModuliError):
    def __init__(self, message, column):
        super().__init__(f"{message} (column {column})")
        self.column = column
