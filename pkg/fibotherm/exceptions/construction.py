from .base import FibothermException


class KneadingIndexError(FibothermException, IndexError):
    """Implements an error to raise if a kneading map is too short for the requested index."""


class NonSummableError(FibothermException):
    """Implements an error to raise if the interval lengths sum to more than one half."""


class ConditionFailureError(FibothermException):
    """Implements an error to raise if a kneading map fails the construction condition."""

    def __init__(self, message: str, k: int | None = None) -> None:
        super().__init__(message)
        self.k: int | None = k


class TailTooShortError(FibothermException):
    """Implements an error to raise if a tail sum has not converged at the truncation depth."""
