"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ConsistencyError(ArithmeticError):
    """Two supposedly equivalent computation routes disagree beyond tolerance."""


class ConvergenceError(RuntimeError):
    """An iterative method failed to reach its stopping criterion."""
