from types import TracebackType
from typing import Sequence
from typing import Type


class ExceptionManager:
    """
    A context manager that catches the given exceptions and keeps the exception and its traceback.

    Exceptions whose class is listed in ``catch`` are always caught, even if they subclass a class listed in
    ``allow``. Grid commands use it to turn numerical failures of a single point into a status column.

    :ivar exception: The exception raised within the context, if any.
    :ivar traceback: The traceback of the exception, if any.
    :ivar catch: The exceptions that are caught.
    :ivar allow: The subclasses of caught exceptions that are allowed to rise.
    """

    __slots__ = ("allow", "catch", "exception", "traceback")

    def __init__(self, *catch: Type[BaseException], allow: Sequence[Type[BaseException]] | None = None) -> None:
        """
        :param catch: Exception types that are caught and not allowed to rise.
        :param allow: Exception types that rise even if they subclass a caught type, defaults to None.
        """  # noqa: D205
        self.exception: BaseException | None = None
        self.traceback: TracebackType | None = None
        self.catch: tuple[Type[BaseException], ...] = catch
        self.allow: tuple[Type[BaseException], ...] = tuple(allow or [])

    def __enter__(self) -> "ExceptionManager":
        return self

    def __exit__(
        self,
        exc_type: Type[BaseException] | None,
        exc_val: BaseException | None,
        exc_tb: TracebackType | None,
    ) -> bool:
        self.exception = exc_val
        self.traceback = exc_tb

        if not exc_type:
            return False

        return any(issubclass(exc_type, e) for e in self.catch) and (
            exc_type in self.catch or not any(issubclass(exc_type, e) for e in self.allow)
        )

    @property
    def status(self) -> str:
        """
        The status of the managed block: "ok", or the class name of the caught exception without the Error suffix.
        """
        if self.exception is None:
            return "ok"
        return type(self.exception).__name__.removesuffix("Error")
