from typing import Any
from typing import ClassVar

from mpmath import mpf
from mpmath import nstr
from pydantic import BaseModel
from pydantic import ConfigDict


def mpf_text(value: mpf | float | int, digits: int = 40) -> str:
    """
    Render an extended precision number as a decimal string.

    :param value: The number to render.
    :param digits: The number of significant digits, defaults to 40.
    :return: The decimal representation of the number.
    """
    return nstr(mpf(value), digits, strip_zeros=False) if isinstance(value, mpf) else repr(value)


class ReportModel(BaseModel):
    """
    A frozen BaseModel for results that are emitted as JSON documents or CSV rows.

    Subclasses choose the CSV columns with ``row_fields``; when it is empty, every field whose value is a scalar is
    used.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)
    row_fields: ClassVar[tuple[str, ...]] = ()

    def row(self) -> dict[str, Any]:
        """
        Flatten the report into a CSV row.

        :return: A dict of column names and JSON-compatible scalar values.
        """
        data: dict[str, Any] = self.model_dump(mode="json", by_alias=True)
        if self.row_fields:
            return {k: data[k] for k in self.row_fields}
        return {k: v for k, v in data.items() if not isinstance(v, (list, dict))}


class PrecisionModel(BaseModel):
    """A frozen BaseModel that may hold mpmath numbers."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
