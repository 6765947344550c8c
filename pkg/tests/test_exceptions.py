import pytest

from fibotherm.exceptions import BoundaryPointError
from fibotherm.exceptions import BracketFailureError
from fibotherm.exceptions import CombinatorialOverflowError
from fibotherm.exceptions import ConditionFailureError
from fibotherm.exceptions import DepthExceededError
from fibotherm.exceptions import DivisionNearZeroError
from fibotherm.exceptions import FibothermException
from fibotherm.exceptions import InfiniteInducingTimeError
from fibotherm.exceptions import InvariantUnavailableError
from fibotherm.exceptions import KneadingIndexError
from fibotherm.exceptions import NoConvergenceError
from fibotherm.exceptions import NonPositiveWeightError
from fibotherm.exceptions import NonSummableError
from fibotherm.exceptions import OutsideDomainError
from fibotherm.exceptions import ParameterError
from fibotherm.exceptions import PrecisionExhaustedError
from fibotherm.exceptions import TailTooShortError


def test_subclasses():
    for exception in (
        ParameterError,
        KneadingIndexError,
        NonSummableError,
        TailTooShortError,
        DepthExceededError,
        OutsideDomainError,
        BoundaryPointError,
        NoConvergenceError,
        PrecisionExhaustedError,
        BracketFailureError,
        DivisionNearZeroError,
        CombinatorialOverflowError,
        InvariantUnavailableError,
        InfiniteInducingTimeError,
        NonPositiveWeightError,
    ):
        with pytest.raises(FibothermException):
            raise exception("message")


def test_builtin_bases():
    with pytest.raises(ValueError):  # noqa: PT011
        raise ParameterError("lambda must lie in (0, 1)")

    with pytest.raises(IndexError):
        raise KneadingIndexError("Q(41) is not defined")


def test_condition_failure_index():
    error = ConditionFailureError("Q(k+1) > Q(Q(Q(k))+1) fails", 7)
    assert error.k == 7
    assert str(error) == "Q(k+1) > Q(Q(Q(k))+1) fails"
