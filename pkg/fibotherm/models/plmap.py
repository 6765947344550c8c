from math import ceil
from math import log10
from typing import Any
from typing import get_args as get_type_args
from typing import Literal
from typing_extensions import Self

from mpmath import mpf
from mpmath import workprec
from pydantic import field_serializer
from pydantic import field_validator
from pydantic import model_validator
from pydantic import ValidationInfo

from .base import mpf_text
from .base import PrecisionModel
from .base import ReportModel
from .kneading import KneadingData

TSide = Literal["Left", "Right"]
TFamily = Literal["fibonacci", "power-law", "custom"]

SideEnum: tuple[TSide, ...] = get_type_args(TSide)
FamilyEnum: tuple[TFamily, ...] = get_type_args(TFamily)

GUARD_BITS: int = 32


def digits_for_bits(bits: int) -> int:
    return ceil(bits * log10(2)) + 3


class PLMap(PrecisionModel):
    """
    A countably piecewise-linear unimodal map truncated at depth N.

    All arrays are indexed by the branch j = 0..N. Distances to the critical point c = 1/2 are kept in ``tail`` so
    that points close to c keep their relative precision.

    :ivar family: The family the map was built from.
    :ivar lam: The parameter of the Fibonacci family, if any.
    :ivar precision_bits: Working precision of the stored numbers, guard bits excluded.
    :ivar kneading: The kneading data, to depth at least N.
    :ivar N: The truncation depth.
    :ivar eps: Interval lengths epsilon_j = |W_j|.
    :ivar tail: Distances c - z_j, i.e. the sums of epsilon_i for i > j, including the tail beyond N.
    :ivar z: Left precritical points z_j.
    :ivar kappa: Slopes of f on W_j.
    :ivar s: Slopes of the induced map on W_j; ``s[0]`` is not a branch of the induced map.
    :ivar fvals: Values f(z_j), with f(z_0) = 1/2.
    :ivar sides: Side of c_{S_k} relative to c, 1 for right, 0 for left, for k = 0..N.
    """

    family: TFamily = "custom"
    lam: float | None = None
    precision_bits: int
    kneading: KneadingData
    N: int
    eps: tuple[mpf, ...]
    tail: tuple[mpf, ...]
    z: tuple[mpf, ...]
    kappa: tuple[mpf, ...]
    s: tuple[mpf, ...]
    fvals: tuple[mpf, ...]
    sides: tuple[int, ...]

    @field_validator("eps", "tail", "z", "kappa", "s", "fvals", mode="before")
    @classmethod
    def _validate_numbers(cls, values: Any, info: ValidationInfo) -> Any:  # noqa: ANN401
        if isinstance(values, (list, tuple)) and any(isinstance(v, str) for v in values):
            with workprec(info.data.get("precision_bits", 113) + GUARD_BITS):
                return tuple(mpf(v) for v in values)
        return values

    @model_validator(mode="after")
    def _validate_model(self) -> Self:
        size: int = self.N + 1
        if any(len(a) != size for a in (self.eps, self.tail, self.z, self.kappa, self.s, self.fvals, self.sides)):
            raise ValueError(f"Map arrays must have N+1={size} entries")
        if self.kneading.K < self.N:
            raise ValueError(f"Kneading depth {self.kneading.K} is shorter than the map depth {self.N}")
        if any(e <= 0 for e in self.eps):
            raise ValueError("Interval lengths must be positive")
        return self

    @field_serializer("eps", "tail", "z", "kappa", "s", "fvals")
    def _serialize_numbers(self, values: tuple[mpf, ...]) -> list[str]:
        digits: int = digits_for_bits(self.precision_bits + GUARD_BITS)
        return [mpf_text(v, digits) for v in values]

    @property
    def c(self) -> mpf:
        """The critical point 1/2."""
        return mpf(1) / 2

    @property
    def critical_value(self) -> mpf:
        """The critical value c_1 = f(c), up to the truncated tail."""
        return self.fvals[self.N]


class BranchInfo(PrecisionModel):
    """
    Description of a branch of the induced map F on W_j and its mirror image.

    :ivar j: The branch index, at least 1.
    :ivar inducing_time: The number of iterates S_{j-1} of f that make up F on the branch.
    :ivar slope: The slope magnitude s_j.
    :ivar orientation: The sign of the slope of F on W_j; the mirror branch has the opposite sign.
    :ivar image_side: The side of c where F(W_j) lies.
    :ivar image: The endpoints of F(W_j), one of which is c.
    :ivar image_length: The length s_j * epsilon_j of the image.
    :ivar confirmed: True if the side was confirmed by composing f at the branch midpoint.
    """

    j: int
    inducing_time: int
    slope: mpf
    orientation: Literal[1, -1]
    image_side: TSide
    image: tuple[mpf, mpf]
    image_length: mpf
    confirmed: bool = False

    @field_serializer("slope", "image_length")
    def _serialize_number(self, value: mpf) -> str:
        return mpf_text(value)

    @field_serializer("image")
    def _serialize_image(self, value: tuple[mpf, mpf]) -> list[str]:
        return [mpf_text(v) for v in value]


class ConditionCheck(ReportModel):
    """
    The slope conditions at a single branch.

    :ivar j: The branch index.
    :ivar lhs: (s_j / kappa_j) times the sum of kappa_i * epsilon_i for i > j.
    :ivar bound_short: The bound epsilon_{Q(j)}.
    :ivar bound_long: The bound epsilon_{Q(Q(j))+1} / s_{Q(j)}, only when Q(j) > 0.
    :ivar margin: The smallest ratio of a bound over lhs; above 1 means the conditions hold.
    :ivar passed: Whether both conditions hold.
    """

    j: int
    lhs: float
    bound_short: float
    bound_long: float | None
    margin: float
    passed: bool


class ConditionReport(ReportModel):
    checks: tuple[ConditionCheck, ...]
    passed: bool
    first_failure: int | None = None


class BranchRow(ReportModel):
    """A CSV row describing the data of a single branch of a map."""

    j: int
    S: int
    Q: int
    eps: str
    z: str
    kappa: str
    s: str
    fval: str


class PointEvaluation(ReportModel):
    """
    The value of f and of the induced map at a point.

    :ivar x: The point.
    :ivar f: f(x), or None if the point is not resolved.
    :ivar branch: The branch of the induced map containing x, if any.
    :ivar F: F(x), or None if the induced map is not defined at x.
    :ivar status: "ok" or the name of the error that prevented the evaluation.
    """

    x: str
    f: str | None
    branch: int | None
    F: str | None
    status: str
