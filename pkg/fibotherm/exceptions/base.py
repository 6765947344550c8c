class FibothermException(Exception):
    """Base class for fibotherm exceptions."""


class ParameterError(FibothermException, ValueError):
    """Implements an error to raise if a parameter lies outside the domain of an operation."""
