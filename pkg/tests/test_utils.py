from io import StringIO
from logging import Logger
from pathlib import Path
from re import match

import pytest
from click import command
from click import Context
from click import option
from click import pass_context
from click.testing import CliRunner

from fibotherm.exceptions import PrecisionExhaustedError
from fibotherm.models.thermo import PressurePoint
from fibotherm.models.walk import ClassifyRow
from fibotherm.utils.click import end_program
from fibotherm.utils.click import param_callback_grid
from fibotherm.utils.click import start_program
from fibotherm.utils.functions import linspace
from fibotherm.utils.functions import parse_grid
from fibotherm.utils.functions import rm_tree
from fibotherm.utils.helpers import ExceptionManager
from fibotherm.utils.io import emit
from fibotherm.utils.io import load_reports
from fibotherm.utils.io import read_csv
from fibotherm.utils.io import render_csv
from fibotherm.utils.io import render_json
from fibotherm.utils.log import setup_logger


def test_functions_rm_tree(temp_folder: Path):
    test_folder = temp_folder.joinpath("1")
    test_folder.joinpath("2", "3").mkdir(parents=True, exist_ok=True)
    test_folder.joinpath("2", "file.txt").write_text("text")
    rm_tree(test_folder)
    assert not test_folder.is_dir()
    assert temp_folder.is_dir()


def test_functions_linspace():
    assert linspace(0, 1, 5) == (0, 0.25, 0.5, 0.75, 1)
    assert linspace(2, 3, 1) == (2,)

    with pytest.raises(ValueError):  # noqa: PT011
        linspace(0, 1, 0)


def test_functions_parse_grid():
    grid = parse_grid("0.05:0.95:0.05")
    assert len(grid) == 19
    assert grid[0] == 0.05
    assert grid[-1] == 0.95
    assert grid[9] == 0.5
    assert parse_grid("0.1:0.35:0.1") == (0.1, 0.2, 0.3)
    assert parse_grid(" 0.3, 0.5,0.7 ") == (0.3, 0.5, 0.7)

    for text in ("", "1:2", "0.5:0.1:0.1", "0:1:0", "a,b"):
        with pytest.raises(ValueError):  # noqa: PT011
            parse_grid(text)


def test_helpers_context_manager():
    with ExceptionManager(BaseException) as context:
        raise SystemExit(3)

    assert isinstance(context.exception, SystemExit)
    assert context.exception.code == 3
    assert context.traceback is not None

    with (
        pytest.raises(KeyboardInterrupt) as raises,
        ExceptionManager(Exception) as context,
    ):
        raise KeyboardInterrupt

    assert isinstance(raises.value, KeyboardInterrupt)
    assert isinstance(context.exception, KeyboardInterrupt)
    assert context.traceback is not None

    with (
        pytest.raises(OSError) as raises,  # noqa: PT011
        ExceptionManager(BaseException, allow=[OSError]) as context,
    ):
        raise FileNotFoundError

    assert isinstance(raises.value, FileNotFoundError)
    assert isinstance(context.exception, FileNotFoundError)

    with ExceptionManager(BaseException, FileNotFoundError, allow=[OSError]) as context:
        raise FileNotFoundError

    assert isinstance(context.exception, FileNotFoundError)

    with ExceptionManager() as context:
        pass

    assert context.exception is None
    assert context.traceback is None


def test_helpers_status():
    with ExceptionManager(PrecisionExhaustedError) as context:
        pass

    assert context.status == "ok"

    with ExceptionManager(PrecisionExhaustedError) as context:
        raise PrecisionExhaustedError("bracket below the smallest double")

    assert context.status == "PrecisionExhausted"


def test_log_setup_logger(temp_folder: Path):
    log_file: Path = temp_folder / "test.log"
    logger = setup_logger("test", files=[log_file])
    logger.info("test info message")
    logger.warning("test warning message")
    logger.error("test error message")
    log_lines: list[str] = log_file.read_text().strip().splitlines()

    assert match(r"\d{4}-\d\d-\d\d \d\d:\d\d:\d\d INFO: test info message", log_lines[0])
    assert match(r"\d{4}-\d\d-\d\d \d\d:\d\d:\d\d WARNING: test warning message", log_lines[1])
    assert match(r"\d{4}-\d\d-\d\d \d\d:\d\d:\d\d ERROR: test error message", log_lines[2])


def test_log_setup_logger_replaces_handlers(temp_folder: Path):
    stream: StringIO = StringIO()
    setup_logger("test-replace", streams=[stream])
    logger: Logger = setup_logger("test-replace", streams=[stream])
    logger.info("once")

    assert len(logger.handlers) == 1
    assert stream.getvalue().count("once") == 1

    with pytest.raises(AssertionError):
        setup_logger("test-empty")


def test_io_render():
    rows = [
        ClassifyRow(lam=0.3, drift=-0.5, second_moment=1.0, tail_ratio=0.7, regime="Acip"),
        ClassifyRow(lam=0.6, drift=0.5, second_moment=2.0, tail_ratio=2.4, regime="WildAttractor"),
    ]

    csv_rows = read_csv(render_csv(rows))
    assert [r["lambda"] for r in csv_rows] == ["0.3", "0.6"]
    assert [r["regime"] for r in csv_rows] == ["Acip", "WildAttractor"]
    assert render_csv([]) == ""

    assert load_reports(render_json(rows), ClassifyRow) == rows


def test_io_render_missing_values():
    point = PressurePoint(lam=0.7, t=0.69, p=None, status="PrecisionExhausted")
    row = read_csv(render_csv([point]))[0]

    assert list(row) == ["lambda", "t", "p", "residual", "lower_factor", "upper_factor", "status"]
    assert row["p"] == ""
    assert row["status"] == "PrecisionExhausted"


def test_io_emit(temp_folder: Path):
    row = ClassifyRow(lam=0.5, drift=0, second_moment=1.5, tail_ratio=1.6, regime="SigmaFiniteInfinite")
    stream: StringIO = StringIO()
    emit(row, "csv", None, stream)
    assert read_csv(stream.getvalue())[0]["regime"] == "SigmaFiniteInfinite"

    output: Path = temp_folder / "emit" / "row.json"
    emit([row], "json", output, stream)
    assert load_reports(output.read_text(), ClassifyRow) == [row]


def test_click_param_callback_grid():
    @command("grid")
    @option("--grid", callback=param_callback_grid(0, 1))
    def _app(grid: tuple[float, ...] | None):
        print(grid)

    runner: CliRunner = CliRunner()
    assert runner.invoke(_app, ["--grid", "0.25,0.5"]).output.strip() == "(0.25, 0.5)"
    assert runner.invoke(_app, []).output.strip() == "None"
    assert runner.invoke(_app, ["--grid", "0.5,1.0"]).exit_code == 2
    assert runner.invoke(_app, ["--grid", "1:2"]).exit_code == 2


def test_click_start_end_program(temp_folder: Path):
    log_file: Path = temp_folder / "program.log"

    @command("program")
    @option("--value", type=int)
    @pass_context
    def _app(ctx: Context, value: int):
        logger_file, logger_stderr, start = start_program(ctx, "1.0.0", log_file)
        with ExceptionManager(BaseException) as exception:
            raise ValueError(value)
        end = end_program(ctx, exception, logger_file, logger_stderr)
        return start, end

    start, end = _app.main(["--value", "3"], standalone_mode=False)
    log_lines: list[str] = log_file.read_text().strip().splitlines()

    assert start.operation == "program:start"
    assert start.data["params"] == {"value": 3}
    assert end.operation == "program:end"
    assert end.data == "ValueError(3)"
    assert "raise ValueError(value)" in end.reason
    assert "INFO: program:start" in log_lines[0]
    assert any("ERROR: program:end" in line for line in log_lines)
