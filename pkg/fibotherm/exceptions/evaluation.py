from .base import FibothermException


class DepthExceededError(FibothermException):
    """Implements an error to raise if a point lies closer to the critical point than the truncation depth resolves."""


class OutsideDomainError(FibothermException):
    """Implements an error to raise if a point lies outside the domain of the induced map."""


class BoundaryPointError(FibothermException):
    """Implements an error to raise if a point is a precritical endpoint of a branch."""
