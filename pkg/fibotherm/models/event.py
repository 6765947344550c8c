from datetime import datetime
from logging import Logger
from typing import Any
from typing_extensions import Self
from typing import Sequence

from click import Context
from orjson import dumps
from orjson import OPT_NON_STR_KEYS
from pydantic import BaseModel
from pydantic import Field

from fibotherm.__version__ import __version__


class Event(BaseModel):
    """
    A record of a step in a command run.

    :ivar time: When the event happened.
    :ivar operation: The command path and operation, e.g. ``fibotherm.pressure:start``.
    :ivar data: Any data attached to the event.
    :ivar reason: A free-text explanation, e.g. a traceback.
    """

    time: datetime = Field(default_factory=datetime.now)
    operation: str
    data: object | None = None
    reason: str | None = None

    @classmethod
    def from_command(
        cls,
        ctx: Context | str,
        operation: str,
        data: object | None = None,
        reason: str | None = None,
        time: datetime | None = None,
        add_params_to_data: bool = False,
    ) -> Self:
        """
        Create an Event for a command.

        :param ctx: The context of the running command, or the dotted command name.
        :param operation: The name of the operation within the command.
        :param data: Optional. Additional data for the event.
        :param reason: Optional. The reason for the event, defaults to None.
        :param time: Optional. The timestamp of the event, defaults to now.
        :param add_params_to_data: If true, add the version and the context parameters to data, defaults to False.
        :raises TypeError: If parameters are requested without a click context, or data cannot hold them.
        :return: An ``Event`` instance.
        """
        if isinstance(ctx, Context):
            command_parts: list[str] = [ctx.command.name]
            current: Context = ctx
            while current.parent is not None:
                current = current.parent
                command_parts.insert(0, current.command.name)
            command: str = ".".join(command_parts)
        else:
            command = ctx

        if add_params_to_data and not isinstance(ctx, Context):
            raise TypeError(f"add_params_to_data is not compatible with ctx of type {type(ctx)}")

        if add_params_to_data:
            params: dict[str, Any] = {"fibotherm": __version__, "params": ctx.params}
            if data is None:
                data = params
            elif isinstance(data, dict):
                data = data | params
            elif isinstance(data, list):
                data = [*data, params]
            else:
                raise TypeError(f"Data type {type(data)} is not compatible with add_params_to_data")

        return cls(
            time=time or datetime.now(),
            operation=f"{command.strip(':.')}:{operation.strip(':')}",
            data=data,
            reason=reason,
        )

    def message(self, show_null: bool = False, show_args: bool | Sequence[str] = True, **extra: Any) -> str:  # noqa: ANN401
        """
        Render the event as a log line ``{operation} data={data} reason={reason} {key}={value}...``.

        :param show_null: Whether to include null values. Default is False.
        :param show_args: True to show data and reason, or the names of the ones to show. Default is True.
        :param extra: Additional ``key=value`` pairs appended to the message.
        :return: The log message.
        """
        names: Sequence[str] = ("data", "reason") if show_args is True else (show_args or ())
        msg: str = self.operation

        if "data" in names and (show_null or self.data is not None):
            msg += f" data={dumps(self.data, default=str, option=OPT_NON_STR_KEYS).decode()}"
        if "reason" in names and (show_null or self.reason is not None):
            msg += f" reason={(self.reason or '').strip()}"

        for keyword, value in extra.items():
            msg += f" {keyword.strip()}={value}"

        return msg

    def log(
        self,
        level: int,
        *logger: Logger | None,
        show_null: bool = False,
        show_args: bool | Sequence[str] = True,
        **extra: Any,  # noqa: ANN401
    ):
        """
        Log the event with the given loggers; ``None`` loggers are skipped.

        :param level: The logging level to be used for the log message.
        :param logger: The logger(s) to which the log message will be sent.
        :param show_null: Whether to include null values in the log message. Default is False.
        :param show_args: True to show data and reason, or the names of the ones to show. Default is True.
        :param extra: Additional arguments to be shown in the log message.
        """
        msg: str = self.message(show_null, show_args, **extra)
        for log in logger:
            if log is not None:
                log.log(level, msg)
