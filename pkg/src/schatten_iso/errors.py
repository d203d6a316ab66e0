"""Exception types raised across the package."""


class SchattenIsoError(Exception):
    """Base class for all package errors."""


class NotHermitian(SchattenIsoError, ValueError):
    pass


class NoConvergence(SchattenIsoError, ArithmeticError):
    pass


class DomainError(SchattenIsoError, ValueError):
    """A scalar function was evaluated outside its declared domain."""


class OrderTooLow(SchattenIsoError, ValueError):
    """A confluent divided difference needs a derivative the symbol does not provide."""


class ArityMismatch(SchattenIsoError, ValueError):
    pass


class DimensionMismatch(SchattenIsoError, ValueError):
    pass


class SingularOperand(SchattenIsoError, ValueError):
    pass


class ZeroCoordinate(SchattenIsoError, ValueError):
    pass


class NotVanishing(SchattenIsoError, ValueError):
    pass


class IllConditioned(SchattenIsoError, ArithmeticError):
    pass


class MatchAmbiguous(SchattenIsoError, ArithmeticError):
    pass


class BudgetExhausted(SchattenIsoError):
    """The global evaluation budget ran out; ``report`` holds the best result so far."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
