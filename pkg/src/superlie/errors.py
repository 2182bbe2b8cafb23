"""Exception types shared across the package."""


class SuperLieError(Exception):
    pass


class ContextMismatchError(SuperLieError, ValueError):
    """Operands live in different truncation contexts."""


class InconclusiveError(SuperLieError):
    """The truncation window is too small to certify the requested identity."""


class NotInImageError(SuperLieError, ValueError):
    """A linear solve found no preimage (or no coordinates in a span)."""


class SeriesSpecError(SuperLieError, ValueError):
    pass
