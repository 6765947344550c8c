from datetime import datetime
from io import StringIO
from logging import DEBUG
from logging import INFO
from logging import Logger
from logging import WARNING

import pytest
from click import Context
from click import group
from click import option
from click import pass_context
from orjson import dumps

from fibotherm.__version__ import __version__
from fibotherm.models.event import Event
from fibotherm.models.thermo import PressurePoint
from fibotherm.utils.log import setup_logger


@pytest.fixture
def stream() -> StringIO:
    return StringIO()


@pytest.fixture
def logger(stream: StringIO) -> Logger:
    return setup_logger("test-events", streams=[stream])


def _lines(stream: StringIO) -> list[str]:
    return [line.split(": ", 1)[1] for line in stream.getvalue().splitlines() if line.strip()]


def test_event_pressure_point(stream: StringIO, logger: Logger):
    point = PressurePoint(lam=0.7, t=0.88, p=None, status="PrecisionExhausted")
    event = Event(operation="fibotherm.pressure:point", data=point.row(), reason=point.status)

    event.log(WARNING, logger)
    assert _lines(stream)[-1] == (
        f"fibotherm.pressure:point data={dumps(point.row()).decode()} reason=PrecisionExhausted"
    )

    event.log(DEBUG, logger)
    assert len(_lines(stream)) == 1

    event.log(INFO, logger, None, show_args=["reason"], precision_bits=256)
    assert _lines(stream)[-1] == "fibotherm.pressure:point reason=PrecisionExhausted precision_bits=256"


def test_event_message():
    event = Event(operation="fibotherm.pressure:end")

    assert event.message() == "fibotherm.pressure:end"
    assert event.message(show_null=True) == "fibotherm.pressure:end data=null reason="
    assert event.message(show_args=False, status="ok") == "fibotherm.pressure:end status=ok"

    keyed = Event(operation="fibotherm.classify:end", data={0.3: "Acip"})
    assert keyed.message() == 'fibotherm.classify:end data={"0.3":"Acip"}'


def test_event_from_command():
    time = datetime.now()

    @group("fibotherm")
    def _app():
        pass

    @_app.command("pressure")
    @option("--lambda", "lam", type=float, required=True)
    @option("--jobs", type=int, default=1)
    @pass_context
    def _pressure(ctx: Context, **_) -> Event:
        return Event.from_command(ctx, "start", {"points": 3}, time=time, add_params_to_data=True)

    event: Event = _app.main(["pressure", "--lambda", "0.7", "--jobs", "2"], standalone_mode=False)
    assert event.operation == "fibotherm.pressure:start"
    assert event.time == time
    assert event.data == {"points": 3, "fibotherm": __version__, "params": {"lam": 0.7, "jobs": 2}}
    assert event.reason is None


def test_event_from_name():
    event = Event.from_command("fibotherm.verify", "summary", data=["gurevich"], reason="failed")
    assert event.operation == "fibotherm.verify:summary"
    assert event.message() == 'fibotherm.verify:summary data=["gurevich"] reason=failed'

    assert Event.from_command("fibotherm.verify.", ":end").operation == "fibotherm.verify:end"

    with pytest.raises(TypeError):
        Event.from_command("fibotherm.verify", "summary", add_params_to_data=True)
