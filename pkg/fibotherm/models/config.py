from os import environ
from pathlib import Path
from typing import Any
from typing import get_args as get_type_args
from typing import Literal
from typing_extensions import Self

from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from yaml import safe_load

TPrecisionBits = Literal[53, 113, 256]
TEmitFormat = Literal["json", "csv"]

PrecisionBitsEnum: tuple[TPrecisionBits, ...] = get_type_args(TPrecisionBits)
EmitFormatEnum: tuple[TEmitFormat, ...] = get_type_args(TEmitFormat)

PRECISION_ENVVAR: str = "FIBOTHERM_PRECISION_BITS"


class RunConfig(BaseModel):
    """
    Settings shared by every command.

    :ivar precision_bits: Mantissa width of the extended precision arithmetic.
    :ivar depth: Number of branches N kept by maps and transition matrices.
    :ivar weights_tail_tolerance: Largest accepted deficit 1 - H of the conformal weights.
    :ivar bisection_tolerance: Relative width at which the pressure bisection stops.
    :ivar power_tolerance: l1 tolerance of power iterations.
    :ivar power_max_iterations: Iteration budget of power iterations.
    :ivar max_weight_depth: Largest index of the weight recursion before giving up.
    :ivar seed: Master seed of the Monte Carlo generators.
    :ivar threads: Worker threads used by the walk simulation.
    :ivar emit: Output format.
    :ivar output: Output file, or None for standard output.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    precision_bits: TPrecisionBits = 113
    depth: int = Field(200, ge=10)
    weights_tail_tolerance: float = Field(1e-12, gt=0)
    bisection_tolerance: float = Field(1e-20, gt=0)
    power_tolerance: float = Field(1e-13, gt=0)
    power_max_iterations: int = Field(100_000, gt=0)
    max_weight_depth: int = Field(4000, ge=20)
    seed: int = Field(20240607, ge=0)
    threads: int = Field(1, ge=1)
    emit: TEmitFormat = "csv"
    output: Path | None = None

    @classmethod
    def from_yaml(cls, path: Path) -> Self:
        """
        Load a configuration from a YAML mapping.

        :param path: The path to the YAML file.
        :raises pydantic.ValidationError: If a value is invalid.
        :return: A RunConfig object.
        """
        with path.open(encoding="utf-8") as fh:
            data: dict[str, Any] = safe_load(fh) or {}
        return cls.model_validate(data)

    @classmethod
    def load(cls, path: Path | None = None, **overrides: Any) -> Self:  # noqa: ANN401
        """
        Merge defaults, a YAML file, the precision environment variable, and explicit overrides.

        Overrides that are None are ignored so that unset command line options keep lower priority values.

        :param path: Optional. The YAML file to read.
        :param overrides: Values that take precedence over every other source.
        :return: A RunConfig object.
        """
        data: dict[str, Any] = cls.from_yaml(path).model_dump(exclude_unset=True) if path else {}
        if env_bits := environ.get(PRECISION_ENVVAR, "").strip():
            data["precision_bits"] = int(env_bits)
        data |= {k: v for k, v in overrides.items() if v is not None}
        return cls.model_validate(data)
