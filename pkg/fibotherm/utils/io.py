from csv import DictReader
from csv import DictWriter
from io import StringIO
from pathlib import Path
from typing import Any
from typing import IO
from typing import Sequence
from typing import TypeVar

from orjson import dumps
from orjson import loads
from orjson import OPT_INDENT_2
from orjson import OPT_SERIALIZE_NUMPY
from pydantic import BaseModel
from pydantic import TypeAdapter

from fibotherm.models.base import ReportModel
from fibotherm.models.config import TEmitFormat

M = TypeVar("M", bound=BaseModel)


def render_json(reports: BaseModel | Sequence[BaseModel]) -> str:
    """
    Render one report, or a list of reports, as a JSON document.

    :param reports: The report or reports.
    :return: The JSON text, ending with a newline.
    """
    data: Any = (
        reports.model_dump(mode="json", by_alias=True)
        if isinstance(reports, BaseModel)
        else [r.model_dump(mode="json", by_alias=True) for r in reports]
    )
    return dumps(data, option=OPT_INDENT_2 | OPT_SERIALIZE_NUMPY).decode() + "\n"


def render_csv(rows: Sequence[ReportModel]) -> str:
    """
    Render reports as CSV rows with a header, using ``ReportModel.row``.

    :param rows: The reports; all must produce the same columns.
    :return: The CSV text.
    """
    if not rows:
        return ""
    data: list[dict[str, Any]] = [r.row() for r in rows]
    buffer: StringIO = StringIO()
    writer: DictWriter = DictWriter(buffer, fieldnames=list(data[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows({k: "" if v is None else v for k, v in d.items()} for d in data)
    return buffer.getvalue()


def emit(reports: BaseModel | Sequence[BaseModel], fmt: TEmitFormat, output: Path | None, stream: IO[str]):
    """
    Write reports as JSON or CSV to a file, or to a stream when no file is given.

    :param reports: The report or reports; CSV output requires ReportModel objects.
    :param fmt: The format, "json" or "csv".
    :param output: Optional. The output file.
    :param stream: The stream used without an output file.
    """
    text: str
    if fmt == "json":
        text = render_json(reports)
    else:
        text = render_csv([reports] if isinstance(reports, ReportModel) else reports)

    if output:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text, encoding="utf-8")
    else:
        stream.write(text)


def read_csv(text: str) -> list[dict[str, str]]:
    """
    Parse CSV text with a header row.

    :param text: The CSV text.
    :return: One dict per row.
    """
    return list(DictReader(StringIO(text)))


def load_reports(text: str | bytes, model: type[M]) -> list[M]:
    """
    Validate a JSON array of reports.

    :param text: The JSON text.
    :param model: The report model.
    :raises pydantic.ValidationError: If an item is not a valid report.
    :return: The reports.
    """
    return TypeAdapter(list[model]).validate_python(loads(text))
