"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`UmbilicalError`,
which is itself a ``ValueError`` so that callers treating bad input generically
keep working.
"""


class UmbilicalError(ValueError):
    pass


class DimensionError(UmbilicalError):
    pass


class ProjectionError(UmbilicalError):
    pass


class InvalidSurfaceError(UmbilicalError):
    pass


class DomainError(UmbilicalError):
    """A point or parameter lies outside the domain where a formula is valid."""


class DegenerateInputError(UmbilicalError):
    pass


class StencilError(UmbilicalError):
    pass


class GeodesicPointError(UmbilicalError):
    """Curvature fell below the Frenet threshold.

    ``indices`` holds the offending sample indices, ``window`` the (first, last)
    pair of them.
    """

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(int(i) for i in indices)
        self.window = (self.indices[0], self.indices[-1]) if self.indices else None


class UndefinedInvariantError(UmbilicalError):
    pass


class RecoveryError(UmbilicalError):
    pass


class IntegrationError(UmbilicalError):
    pass


class CurveFormatError(UmbilicalError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
