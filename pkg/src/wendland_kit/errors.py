"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class UnsupportedParameterError(ValueError):
    """A parameter combination is valid in principle but not handled by this routine."""


class ConvergenceError(ArithmeticError):
    """An iterative evaluation did not meet its stopping rule within its budget."""
