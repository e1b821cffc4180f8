"""
Exception hierarchy shared by every layer of the library.
The CLI translates these into exit codes at the boundary.
"""


class QDeformError(Exception):
    """Base class for all library errors"""


class DomainError(QDeformError, ValueError):
    """Parameter outside the domain of the operation"""


class ConvergenceError(QDeformError, ArithmeticError):
    """A series or infinite product does not settle"""


class PoleError(QDeformError, ZeroDivisionError):
    """A denominator parameter hits q^(-j) inside the summation range"""


class NumericalRangeError(QDeformError, OverflowError):
    """A closed form cannot be represented in double precision"""


class InternalConsistencyError(QDeformError, RuntimeError):
    """A realness / sign contract was violated. Signals a bug, not bad input."""


class AccuracyNotReachedError(QDeformError):
    """
    Adaptive quadrature ran out of subdivisions.

    Carries the best estimate so callers can still report it.
    """

    def __init__(self, message: str, estimate: complex, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
