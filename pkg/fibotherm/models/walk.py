from typing import get_args as get_type_args
from typing import Literal

from numpy import ndarray
from pydantic import Field
from pydantic import field_serializer

from .base import PrecisionModel
from .base import ReportModel

TRegime = Literal["Acip", "SigmaFiniteInfinite", "WildAttractor"]

RegimeEnum: tuple[TRegime, ...] = get_type_args(TRegime)


class WalkModel(PrecisionModel):
    """
    The induced map as a Markov chain on the branch indices 1..N.

    Row and column i - 1 of ``A`` belong to state i.

    :ivar lam: The parameter of the lengths.
    :ivar N: The number of states.
    :ivar A: Row-stochastic transition matrix, renormalised over the kept states.
    :ivar deficit: Mass of each row lost to states beyond N before renormalisation.
    :ivar v: Stationary probability vector, or None when the chain does not have one.
    :ivar drift: Expected increment of the state on rows k >= 2.
    :ivar second_moment: The squared drift, lam^2 / (1 - lam)^2 - 2 lam / (1 - lam) + 1.
    :ivar conditional_second_moment: Expected squared increment on rows k >= 2.
    :ivar tail_ratio: Asymptotic ratio of the terms S_{k-1} v_k.
    :ivar regime: The attractor regime.
    :ivar null_recurrent: True on the boundary where the drift vanishes.
    """

    lam: float
    N: int
    A: ndarray
    deficit: ndarray
    v: ndarray | None = None
    drift: float
    second_moment: float
    conditional_second_moment: float
    tail_ratio: float
    regime: TRegime
    null_recurrent: bool = False

    @field_serializer("A", "deficit", "v")
    def _serialize_array(self, value: ndarray | None) -> list | None:
        return None if value is None else value.tolist()


class ClassifyRow(ReportModel):
    lam: float = Field(alias="lambda")
    drift: float
    second_moment: float
    tail_ratio: float
    regime: TRegime


class TailExpectation(ReportModel):
    """
    Partial sums of the expected inducing time.

    :ivar lam: The parameter.
    :ivar partial_sums: The sums of S_{k-1} v_k over k <= K, for K = 1, 2, ...
    :ivar ratio: The asymptotic term ratio golden_mean * lam / (1 - lam).
    :ivar finite: True if the ratio is below 1.
    """

    lam: float = Field(alias="lambda")
    partial_sums: tuple[float, ...]
    ratio: float
    finite: bool
