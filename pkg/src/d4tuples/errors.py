"""Exception hierarchy shared by all modules."""


class D4Error(Exception):
    pass


class DomainError(D4Error, ValueError):
    """An input lies outside the domain of an operation."""


class PrecisionError(D4Error, ArithmeticError):
    """A certified decision could not be reached within the precision cap."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class ResourceError(D4Error, RuntimeError):
    """A bounded search (continued fraction depth, step count) ran out."""
