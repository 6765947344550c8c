from .base import FibothermException


class NoConvergenceError(FibothermException):
    """Implements an error to raise if an iteration does not converge within its budget."""


class PrecisionExhaustedError(FibothermException):
    """Implements an error to raise if a computation needs more precision than configured."""


class BracketFailureError(FibothermException):
    """Implements an error to raise if no bracket for the pressure could be found."""


class DivisionNearZeroError(FibothermException):
    """Implements an error to raise if a recursion divides by a value indistinguishable from zero."""


class CombinatorialOverflowError(FibothermException):
    """Implements an error to raise if a partition sum exceeds the path budget."""


class InvariantUnavailableError(FibothermException):
    """Implements an error to raise if no finite invariant measure exists for the parameters."""


class InfiniteInducingTimeError(FibothermException):
    """Implements an error to raise if the mean inducing time diverges."""


class NonPositiveWeightError(FibothermException):
    """Implements an error to raise if a conformal weight is not positive where positivity is required."""
