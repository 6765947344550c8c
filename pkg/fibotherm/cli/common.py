from contextlib import contextmanager
from logging import Logger
from pathlib import Path
from typing import Any
from typing import Generator
from typing import Sequence

from click import BadParameter
from click import Choice
from click import ClickException
from click import command
from click import Context
from click import get_text_stream
from click import option
from click import Path as ClickPath
from click import UsageError
from pydantic import BaseModel
from pydantic import ValidationError
from yaml import YAMLError

from fibotherm.__version__ import __version__
from fibotherm.exceptions import FibothermException
from fibotherm.exceptions import ParameterError
from fibotherm.models.config import EmitFormatEnum
from fibotherm.models.config import PRECISION_ENVVAR
from fibotherm.models.config import PrecisionBitsEnum
from fibotherm.models.config import RunConfig
from fibotherm.utils.click import end_program
from fibotherm.utils.click import start_program
from fibotherm.utils.helpers import ExceptionManager
from fibotherm.utils.io import emit


@command("common", add_help_option=False)
@option(
    "--config",
    "config_file",
    type=ClickPath(exists=True, dir_okay=False, resolve_path=True, path_type=Path),
    default=None,
    help="A YAML file with run settings.",
)
@option(
    "--precision-bits",
    type=Choice([str(b) for b in PrecisionBitsEnum]),
    envvar=PRECISION_ENVVAR,
    show_envvar=True,
    default=None,
    help="Mantissa width of the extended precision arithmetic.  [default: 113]",
)
@option("--emit", "emit_format", type=Choice(EmitFormatEnum), default=None, help="Output format.  [default: csv]")
@option(
    "--output",
    type=ClickPath(dir_okay=False, writable=True, resolve_path=True, path_type=Path),
    default=None,
    help="Write the output to a file instead of standard output.",
)
@option(
    "--log-file",
    type=ClickPath(dir_okay=False, writable=True, resolve_path=True, path_type=Path),
    default=None,
    help="Append the run events to a file.",
)
def common_options():
    """Options shared by every command."""


def load_config(
    config_file: Path | None,
    precision_bits: str | None,
    emit_format: str | None,
    output: Path | None,
    **overrides: Any,  # noqa: ANN401
) -> RunConfig:
    """
    Merge the run configuration from its sources, with the command line options taking precedence.

    :param config_file: Optional. The YAML file given with ``--config``.
    :param precision_bits: The value of ``--precision-bits``, if given.
    :param emit_format: The value of ``--emit``, if given.
    :param output: The value of ``--output``, if given.
    :param overrides: Other settings set by the command.
    :raises BadParameter: If the settings are not valid.
    :return: A RunConfig object.
    """
    try:
        return RunConfig.load(
            config_file,
            precision_bits=int(precision_bits) if precision_bits else None,
            emit=emit_format,
            output=output,
            **overrides,
        )
    except ValidationError as err:
        messages: list[str] = [f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in err.errors()]
        raise BadParameter("; ".join(messages), param_hint="--config")
    except YAMLError as err:
        raise BadParameter(f"not a valid YAML file: {err}", param_hint="--config")


@contextmanager
def program(ctx: Context, log_file: Path | None) -> Generator[tuple[Logger | None, Logger], None, None]:
    """
    Frame a command run with start and end events, and turn library errors into click errors.

    Rejected inputs become usage errors with exit code 2, other library errors exit with code 1 and a one-line
    diagnostic.

    :param ctx: The context of the command.
    :param log_file: Optional. The file that receives the events.
    :return: A context yielding the file logger, if any, and the standard error logger.
    """
    logger_file, logger_stderr, _ = start_program(ctx, __version__, log_file)

    with ExceptionManager(BaseException) as exception:
        yield logger_file, logger_stderr

    end_program(ctx, exception, logger_file, logger_stderr)

    match exception.exception:
        case None:
            return
        case ParameterError() as err:
            raise UsageError(str(err), ctx) from err
        case FibothermException() as err:
            raise ClickException(f"{type(err).__name__}: {err}") from err
        case err:
            raise err


def write(config: RunConfig, reports: BaseModel | Sequence[BaseModel]):
    """
    Emit reports in the configured format to the configured output.

    :param config: The run configuration.
    :param reports: The report or reports.
    """
    emit(reports, config.emit, config.output, get_text_stream("stdout"))
