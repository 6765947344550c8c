from decimal import Decimal
from typing import get_args as get_type_args
from typing import Literal

from mpmath import mpf
from numpy import ndarray
from pydantic import Field
from pydantic import field_serializer

from .base import mpf_text
from .base import PrecisionModel
from .base import ReportModel
from .walk import TRegime

TWeightStatus = Literal["AllPositiveSumOne", "WentNegative", "SumBelowOne"]
TRootCase = Literal["real", "degenerate", "complex"]
TRecurrence = Literal["PositiveRecurrent", "NullRecurrent", "Transient"]
TConformalCase = Literal["geometric", "linear"]

WeightStatusEnum: tuple[TWeightStatus, ...] = get_type_args(TWeightStatus)
RootCaseEnum: tuple[TRootCase, ...] = get_type_args(TRootCase)
RecurrenceEnum: tuple[TRecurrence, ...] = get_type_args(TRecurrence)


class ThermoConstants(ReportModel):
    """
    Constants of the geometric potential of the Fibonacci map.

    :ivar lam: The parameter.
    :ivar t: The inverse temperature.
    :ivar beta: t * log(lam * (1 - lam)).
    :ivar beta_prime: beta + log(4), i.e. (t - t2) * log(lam * (1 - lam)).
    :ivar t1: The phase transition parameter, 1 if lam <= 1/2 and t2 otherwise.
    :ivar t2: -log(4) / log(lam * (1 - lam)).
    :ivar golden_mean: (1 + sqrt(5)) / 2.
    :ivar gamma: 2 * log(golden_mean) / sqrt(-log(lam * (1 - lam))).
    """

    lam: float = Field(alias="lambda")
    t: float
    beta: float
    beta_prime: float
    t1: float
    t2: float
    golden_mean: float
    gamma: float


class ConformalSolution(PrecisionModel):
    """
    Masses of the branches under the conformal measure for a potential shift p.

    :ivar lam: The parameter.
    :ivar t: The inverse temperature.
    :ivar p: The potential shift.
    :ivar precision_bits: The working precision.
    :ivar weights: The masses w_k of W_k and its mirror image, k = 1..n.
    :ivar partial_sums: The sums H_j of w_k over k <= j.
    :ivar status: Whether all weights are positive with total one, some weight went negative, or the total is below
        one.
    :ivar k0: The first index with a negative weight, if any.
    :ivar deficit: The limit of 1 - H_j, or its last value when the weights went negative.
    """

    lam: float
    t: float
    p: Decimal
    precision_bits: int
    weights: tuple[mpf, ...]
    partial_sums: tuple[mpf, ...]
    status: TWeightStatus
    k0: int | None = None
    deficit: mpf

    @field_serializer("weights", "partial_sums")
    def _serialize_numbers(self, values: tuple[mpf, ...]) -> list[str]:
        return [mpf_text(v) for v in values]

    @field_serializer("deficit")
    def _serialize_deficit(self, value: mpf) -> str:
        return mpf_text(value)

    @property
    def total(self) -> mpf:
        """The total mass H = 1 - deficit."""
        return 1 - self.deficit


class PressurePoint(ReportModel):
    """
    The pressure at a single inverse temperature.

    :ivar lam: The parameter.
    :ivar t: The inverse temperature.
    :ivar p: The pressure, or None if it could not be computed.
    :ivar residual: |H(p, t) - 1| at the returned pressure.
    :ivar bracket: The final bisection bracket.
    :ivar lower_factor: The lower structural factor, below the transition.
    :ivar upper_factor: The upper structural factor, below the transition.
    :ivar status: "ok" or the name of the error that prevented the computation.
    """

    row_fields = ("lambda", "t", "p", "residual", "lower_factor", "upper_factor", "status")

    lam: float = Field(alias="lambda")
    t: float
    p: Decimal | None
    residual: float | None = None
    bracket: tuple[Decimal, Decimal] | None = None
    lower_factor: float | None = None
    upper_factor: float | None = None
    status: str = "ok"


class PressureBounds(ReportModel):
    """
    Structural factors bounding the pressure on a left neighbourhood of t1, up to unknown multiplicative constants.

    :ivar lower_factor: The factor of the lower bound.
    :ivar upper_factor: The factor of the upper bound.
    :ivar R: The ratio R, for 2/(3+sqrt(5)) <= lam < 1/2.
    :ivar gamma: The constant gamma of the exponential bounds.
    """

    lam: float = Field(alias="lambda")
    t: float
    lower_factor: float
    upper_factor: float
    R: float | None = None
    gamma: float


class TransitionScaling(ReportModel):
    """
    Least-squares fit of -log p(t) = slope / sqrt(t1 - t) + intercept on a left neighbourhood of t1.

    :ivar lam: The parameter.
    :ivar slope: The fitted slope.
    :ivar intercept: The fitted intercept.
    :ivar gamma: The constant gamma of the exponential bounds.
    :ivar low: The smallest accepted slope, 0.9 * 5/6 * gamma.
    :ivar high: The largest accepted slope, 1.1 * pi * gamma.
    :ivar points: The number of fitted points.
    :ivar dropped: The inverse temperatures whose pressure could not be computed, with their status.
    """

    lam: float = Field(alias="lambda")
    slope: float
    intercept: float
    gamma: float
    low: float
    high: float
    points: int
    dropped: tuple[tuple[float, str], ...] = ()

    @property
    def within_bounds(self) -> bool:
        """Whether the slope lies between the accepted bounds."""
        return self.low <= self.slope <= self.high


class UkReport(ReportModel):
    lam: float = Field(alias="lambda")
    t: float
    p: float
    values: tuple[float, ...]
    min_u: float
    first_nonpositive: int | None = None
    converges_to_one: bool


class MeasuresReport(ReportModel):
    """
    Closed-form masses of the conformal and invariant measures of the induced map.

    :ivar lam: The parameter.
    :ivar t: The inverse temperature.
    :ivar case: "geometric" when lam^t <= 1/2, "linear" otherwise.
    :ivar conformal: The mass of W_j, equal to the mass of its mirror image, for j = 1..n.
    :ivar invariant_left: The invariant mass of W_j.
    :ivar invariant_right: The invariant mass of the mirror image of W_j.
    :ivar zeta: The invariant mass that the induced map sends left of c.
    :ivar conformal_total: The total conformal mass over both sides.
    :ivar invariant_total: The total invariant mass.
    """

    lam: float = Field(alias="lambda")
    t: float
    case: TConformalCase
    conformal: tuple[float, ...]
    invariant_left: tuple[float, ...] | None = None
    invariant_right: tuple[float, ...] | None = None
    zeta: float | None = None
    conformal_total: float
    invariant_total: float | None = None


class EquilibriumData(PrecisionModel):
    """
    The invariant measure of the induced map built from the conformal weights.

    :ivar lam: The parameter.
    :ivar t: The inverse temperature.
    :ivar p: The pressure.
    :ivar G: The truncated transition matrix.
    :ivar weights: The conformal weights kept in the truncation.
    :ivar v: The stationary vector of G.
    :ivar entropy: The entropy of the Markov measure.
    :ivar entropy_error: A bound on the entropy of the truncated weights.
    :ivar lyap: The integral of log|F'|.
    :ivar Lambda: The mean inducing time.
    :ivar density: The densities v_k / w_k.
    :ivar M: The normalising constant of the projected conformal measure.
    :ivar zeta: The invariant mass that the induced map sends left of c.
    :ivar residual: h + sum_i v_i * (-t * log(s_i) - p * S_{i-1}).
    """

    lam: float
    t: float
    p: Decimal
    G: ndarray
    weights: ndarray
    v: ndarray
    entropy: float
    entropy_error: float
    lyap: float
    Lambda: float
    density: ndarray
    M: float
    zeta: float
    residual: float

    @field_serializer("G", "weights", "v", "density")
    def _serialize_array(self, value: ndarray) -> list:
        return value.tolist()


class ProjectionReport(ReportModel):
    """
    Projection of the induced equilibrium state to the original map.

    :ivar M: The normalising constant of the projected conformal measure.
    :ivar Lambda: The mean inducing time.
    :ivar entropy: The entropy h(mu) / Lambda of the projected measure.
    :ivar lyapunov: The Lyapunov exponent lyap / Lambda of the projected measure.
    :ivar abramov_defect: entropy - t * lyapunov - p.
    """

    lam: float = Field(alias="lambda")
    t: float
    p: Decimal
    M: float
    Lambda: float
    entropy: float
    lyapunov: float
    abramov_defect: float


class RecurrenceReport(ReportModel):
    lam: float = Field(alias="lambda")
    t: float
    t1: float
    p: Decimal | None = None
    induced: TRecurrence
    original: TRecurrence


class GurevichReport(ReportModel):
    """
    Local partition sums Z_n at the first state of the truncated Markov graph.

    :ivar rates: The growth rates (1/n) log Z_n for n = 1..n_max.
    :ivar ratios: The increments log Z_n - log Z_{n-1}, with log Z_0 = 0.
    :ivar sums: The values Z_n.
    :ivar partial_sums: The partial sums of Z_n, the recurrence indicator.
    """

    lam: float = Field(alias="lambda")
    t: float
    p: Decimal
    N: int
    rates: tuple[float, ...]
    ratios: tuple[float, ...]
    sums: tuple[float, ...]
    partial_sums: tuple[float, ...]


class ProbeRow(ReportModel):
    delta: float
    t: float
    p: Decimal | None
    slope: float | None
    Lambda: float | None
    status: str = "ok"


class DerivativeProbe(ReportModel):
    lam: float = Field(alias="lambda")
    t1: float
    regime: TRegime
    rows: tuple[ProbeRow, ...]


class DimensionReport(ReportModel):
    lam: float = Field(alias="lambda")
    dimension: float
    t1: float
    t2: float
    critical_order: float
    regime: TRegime
