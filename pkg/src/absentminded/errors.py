"""Exception types raised by the engine."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SizeError(ValueError):
    """A request exceeds a configured size guard (exact range, recursion depth, ...)."""


class PrecisionError(ArithmeticError):
    """Two working precisions disagree by more than the allowed tolerance."""


class CrossCheckError(AssertionError):
    """Two independent computation routes produced different exact values."""


class DependencyError(LookupError):
    """A required upstream object (e.g. a symbolic expression) is unavailable."""
