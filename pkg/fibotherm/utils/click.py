from datetime import datetime
from logging import ERROR
from logging import INFO
from logging import Logger
from pathlib import Path
from sys import stderr
from traceback import format_tb
from typing import Callable

from click import BadParameter
from click import Command
from click import Context
from click import Parameter

from fibotherm.models.event import Event
from fibotherm.utils.functions import parse_grid
from fibotherm.utils.helpers import ExceptionManager
from fibotherm.utils.log import setup_logger


def ctx_params(ctx: Context) -> dict[str, Parameter]:
    """
    Get parameters from a click context as a dict.

    :param ctx: The ``Context`` object of the command from which to extract parameters.
    :return: A dict of all the parameters of the context's command.
    """
    return {p.name: p for p in ctx.command.params}


def param_callback_grid(
    low: float | None = None,
    high: float | None = None,
) -> Callable[[Context, Parameter, str | None], tuple[float, ...] | None]:
    """
    Create a ``click.Parameter`` callback that parses a grid of numbers.

    A grid is either a comma-separated list of numbers or a range ``start:stop:step``.
    Values must lie strictly between ``low`` and ``high`` when they are given.

    :param low: Optional. The exclusive lower bound of the values.
    :param high: Optional. The exclusive upper bound of the values.
    :return: A ``click.Parameter`` callback function with the signature ``(Context, Parameter, str) -> tuple``.
    """

    def callback(ctx: Context, param: Parameter, value: str | None) -> tuple[float, ...] | None:
        if value is None:
            return value
        try:
            grid: tuple[float, ...] = parse_grid(value)
        except ValueError as err:
            raise BadParameter(str(err), ctx, param)
        if low is not None and any(v <= low for v in grid):
            raise BadParameter(f"values must be greater than {low}", ctx, param)
        if high is not None and any(v >= high for v in grid):
            raise BadParameter(f"values must be less than {high}", ctx, param)
        return grid

    return callback


def copy_params(command: Command) -> Callable[[Command], Command]:
    """
    Copy parameters from one ``Command`` to another.

    :param command: The command from which to copy the parameters.
    """

    def decorator(command2: Command) -> Command:
        command2.params.extend(command.params.copy())
        return command2

    return decorator


def start_program(
    ctx: Context,
    version: str,
    log_file: Path | None = None,
    time: datetime | None = None,
) -> tuple[Logger | None, Logger, Event]:
    """
    Create loggers and ``Event`` for the start of a click program.

    Events go to standard error, which keeps standard output free for the emitted data, and to ``log_file`` when it
    is given.

    :param ctx: The context of the command that should be logged.
    :param version: The version of the program.
    :param log_file: Optional. The file to which events are appended.
    :param time: Optionally, the time to use for the ``Event`` object. Defaults to now.
    :return: A tuple containing the file logger (``None`` without ``log_file``), the standard error logger, and the
        ``Event`` object for the start of the program.
    """
    prog: str = ctx.find_root().command.name
    logger_file: Logger | None = setup_logger(f"{prog}_file", files=[log_file]) if log_file else None
    logger_stderr: Logger = setup_logger(f"{prog}_stderr", streams=[stderr])
    program_start: Event = Event.from_command(
        ctx,
        "start",
        data={"version": version},
        add_params_to_data=True,
        time=time,
    )

    program_start.log(INFO, logger_file)
    program_start.log(INFO, logger_stderr, show_args=False)

    return logger_file, logger_stderr, program_start


def end_program(ctx: Context, exception: ExceptionManager, *loggers: Logger | None) -> Event:
    """
    Create and log the ``Event`` for the end of a click program.

    :param ctx: The context of the command that should be logged.
    :param exception: An ``ExceptionManager`` object that wrapped the command execution.
    :param loggers: The loggers to which to write the end event.
    :return: The ``Event`` object for the end of the program.
    """
    program_end: Event = Event.from_command(
        ctx,
        "end",
        data=repr(exception.exception) if exception.exception else None,
        reason="".join(format_tb(exception.traceback)) if exception.traceback else None,
    )

    program_end.log(ERROR if exception.exception else INFO, *loggers)

    return program_end
