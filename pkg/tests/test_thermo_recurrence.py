from decimal import Decimal
from math import log

import pytest

from fibotherm.exceptions import CombinatorialOverflowError
from fibotherm.exceptions import ParameterError
from fibotherm.thermo import classify_recurrence
from fibotherm.thermo import gurevich_diagnostic
from fibotherm.thermo import LAMBDA_STAR
from fibotherm.thermo import solve_pressure
from fibotherm.thermo import t1


@pytest.mark.parametrize(
    "lam,t,induced,original",
    [
        (0.3, 0.8, "PositiveRecurrent", "PositiveRecurrent"),
        (0.3, 1.0, "PositiveRecurrent", "PositiveRecurrent"),
        (0.45, 1.0, "PositiveRecurrent", "NullRecurrent"),
        (LAMBDA_STAR, 1.0, "PositiveRecurrent", "NullRecurrent"),
        (0.5, 1.0, "NullRecurrent", "NullRecurrent"),
        (0.3, 1.2, "Transient", "Transient"),
        (0.7, 0.8, "PositiveRecurrent", "PositiveRecurrent"),
        (0.7, 0.95, "Transient", "Transient"),
    ],
)
def test_classify_recurrence(lam: float, t: float, induced: str, original: str):
    report = classify_recurrence(lam, t)
    assert report.induced == induced
    assert report.original == original
    assert report.t1 == t1(lam)
    assert report.p is None


def test_classify_recurrence_shifted():
    pressure: Decimal = solve_pressure(0.3, 0.8).p

    at_pressure = classify_recurrence(0.3, 0.8, pressure)
    assert at_pressure.induced == "PositiveRecurrent"
    assert at_pressure.p == pressure

    shifted = classify_recurrence(0.3, 0.8, float(pressure) + 0.1)
    assert shifted.induced == shifted.original == "Transient"

    assert classify_recurrence(0.3, 1.2, 0.1).induced == "Transient"
    assert classify_recurrence(0.3, 1.2, 0).induced == "Transient"

    with pytest.raises(ParameterError):
        classify_recurrence(0.3, -1)


def test_gurevich_single_state():
    report = gurevich_diagnostic(0.3, 0.8, 0.1, n_max=5, depth=1)
    expected: float = 0.8 * log(0.7) - 0.1
    assert report.N == 1
    assert report.rates == pytest.approx([expected] * 5)
    assert report.ratios == pytest.approx([expected] * 5)
    assert report.sums[2] == pytest.approx(((0.7**0.8) * 2.718281828459045**-0.1) ** 3)
    assert report.partial_sums[-1] == pytest.approx(sum(report.sums))


def test_gurevich_at_pressure():
    t: float = t1(0.6) - 0.05
    report = gurevich_diagnostic(0.6, t)
    assert report.p > 0
    assert len(report.rates) == 15
    assert all(r <= 1e-12 for r in report.rates[4:])
    assert abs(report.ratios[-1]) < 0.05
    assert abs(report.ratios[-1]) <= abs(report.ratios[4])
    assert sum(report.ratios) == pytest.approx(15 * report.rates[-1])
    assert all(a <= b for a, b in zip(report.partial_sums, report.partial_sums[1:]))

    above = gurevich_diagnostic(0.6, t, report.p + Decimal("0.1"))
    assert above.rates[-1] <= report.rates[-1] - 0.1 + 1e-9


def test_gurevich_limits():
    with pytest.raises(CombinatorialOverflowError):
        gurevich_diagnostic(0.3, 0.8, 0.1, n_max=21)

    with pytest.raises(CombinatorialOverflowError):
        gurevich_diagnostic(0.3, 0.8, 0.1, n_max=20, depth=500)

    with pytest.raises(ParameterError):
        gurevich_diagnostic(0.3, 0.8, 0.1, n_max=0)
