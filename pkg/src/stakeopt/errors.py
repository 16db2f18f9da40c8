"""Exceptions shared across the package."""


class StakeoptError(Exception):
    """Base class for every error raised by this package."""


class DomainError(StakeoptError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class SingularSystemError(StakeoptError, ArithmeticError):
    """A linear system that should be nonsingular turned out not to be."""
