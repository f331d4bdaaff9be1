"""Exception types shared across the package."""


class QuadratureError(Exception):
    """Base class for errors raised by oscquad."""


class InvalidArgumentError(QuadratureError, ValueError):
    """An argument or configuration violates a documented precondition."""


class NumericError(QuadratureError, ArithmeticError):
    """A non-finite value appeared during evaluation."""

    def __init__(self, message: str, abscissa: float | None = None):
        super().__init__(message)
        self.abscissa = abscissa


class UnsupportedTierError(InvalidArgumentError):
    """Requested tier of the multiple integral has no evaluator."""
