"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation (non-positive area, zero pieces, ...)."""


class DegenerateInputError(DomainError):
    """Geometry input is degenerate: too few points, all collinear, or coincident."""


class DataError(ValueError):
    """A measurement file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
