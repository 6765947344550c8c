from decimal import Decimal
from math import log
from math import sqrt

import numpy as np
import pytest

from fibotherm.exceptions import ParameterError
from fibotherm.exceptions import PrecisionExhaustedError
from fibotherm.models.thermo import PressurePoint
from fibotherm.thermo import conformal_weights
from fibotherm.thermo import dimension_report
from fibotherm.thermo import hyperbolic_dimension
from fibotherm.thermo import LAMBDA_STAR
from fibotherm.thermo import log_pressure_factors
from fibotherm.thermo import pressure as pressure_module
from fibotherm.thermo import pressure_bounds
from fibotherm.thermo import pressure_curve
from fibotherm.thermo import pressure_or_status
from fibotherm.thermo import solve_pressure
from fibotherm.thermo import t1
from fibotherm.thermo import t2
from fibotherm.thermo import thermo_constants
from fibotherm.thermo import transition_scaling


def test_transition_parameters():
    assert t2(0.5) == pytest.approx(1)
    assert t1(0.3) == 1
    assert t1(0.5) == 1
    assert t1(0.7) == t2(0.7)
    assert t2(0.7) < 1
    assert LAMBDA_STAR == pytest.approx((3 - sqrt(5)) / 2)

    with pytest.raises(ParameterError):
        t2(1.5)


def test_thermo_constants():
    constants = thermo_constants(0.7, t2(0.7))
    assert constants.beta_prime == pytest.approx(0, abs=1e-12)
    assert constants.beta == pytest.approx(-log(4))
    assert constants.gamma == pytest.approx(2 * log((1 + sqrt(5)) / 2) / sqrt(-log(0.21)))
    assert constants.row()["lambda"] == 0.7


def test_hyperbolic_dimension():
    assert hyperbolic_dimension(0.4) == pytest.approx(0.9714, abs=1e-4)
    assert hyperbolic_dimension(0.5) == pytest.approx(1)
    assert hyperbolic_dimension(0.6) == 1

    report = dimension_report(0.5)
    assert report.dimension == pytest.approx(1)
    assert report.critical_order == pytest.approx(5)
    assert report.regime == "SigmaFiniteInfinite"


def test_pressure_bounds():
    linear = pressure_bounds(0.3, 0.9)
    assert linear.lower_factor == pytest.approx(0.1)
    assert linear.upper_factor == pytest.approx(0.1)
    assert linear.R is None

    polynomial = pressure_bounds(0.45, 0.995)
    assert polynomial.R is not None
    assert polynomial.R > 1
    assert pressure_bounds(0.45, 0.5).R is None

    exponential = pressure_bounds(0.6, t1(0.6) - 0.01)
    assert 0 < exponential.lower_factor < exponential.upper_factor < 1

    lower, upper, _ = log_pressure_factors(0.7, t1(0.7) - 1e-8)
    assert lower < upper < -100

    with pytest.raises(ParameterError):
        pressure_bounds(0.3, 1.0)


def test_solve_pressure():
    point = solve_pressure(0.3, 0.8)
    assert point.status == "ok"
    assert point.p > 0
    assert point.residual < 1e-12
    assert point.bracket is not None
    assert point.bracket[0] < point.bracket[1] == point.p
    assert point.lower_factor is not None

    assert conformal_weights(0.3, 0.8, point.p).status == "AllPositiveSumOne"
    assert conformal_weights(0.3, 0.8, point.bracket[0]).status == "WentNegative"
    assert solve_pressure(0.3, 0.6).p > point.p

    with pytest.raises(ParameterError):
        solve_pressure(0.3, 0)


def test_pressure_zero_above_transition():
    at_transition = solve_pressure(0.3, 1.0)
    assert at_transition.p == 0
    assert at_transition.residual is not None
    assert at_transition.residual < 1e-12

    assert solve_pressure(0.7, t1(0.7) + 0.05).p == 0
    assert solve_pressure(0.7, t1(0.7) - 0.05).p > 0


def test_pressure_or_status():
    point = pressure_or_status(0.3, 0.8, precision_bits=53)
    assert point.status == "PrecisionExhausted"
    assert point.p is None
    assert point.lower_factor is not None

    assert pressure_or_status(0.3, 1.5, precision_bits=53).p == Decimal(0)


def test_pressure_close_to_transition():
    point = pressure_or_status(0.7, t1(0.7) - 1e-4)
    assert point.status in ("ok", "PrecisionExhausted")
    if point.p is not None:
        assert Decimal(-240).exp() < point.p < Decimal(-64).exp()


def test_pressure_or_status_arithmetic(monkeypatch: pytest.MonkeyPatch):
    def divide(*_args, **_kwargs):
        return 1 / 0

    monkeypatch.setattr(pressure_module, "solve_pressure", divide)
    point = pressure_or_status(0.7, 0.6)
    assert point.status == "ZeroDivision"
    assert point.p is None
    assert point.lower_factor is not None


def test_pressure_unique_root():
    point = solve_pressure(0.3, 0.8)
    below: Decimal = point.p * (1 - Decimal("1e-6"))
    above: Decimal = point.p * (1 + Decimal("1e-6"))
    assert conformal_weights(0.3, 0.8, below).status == "WentNegative"
    assert conformal_weights(0.3, 0.8, above).status == "SumBelowOne"


def test_pressure_curve():
    grid: list[float] = [0.6, 0.8, 1.0]
    points = pressure_curve(0.3, grid)
    assert [p.t for p in points] == grid
    assert all(p.status == "ok" for p in points)
    assert points[0].p > points[1].p > points[2].p == 0
    assert list(points[0].row()) == list(points[0].row_fields)

    parallel = pressure_curve(0.3, grid, jobs=2)
    assert [p.p for p in parallel] == [p.p for p in points]


def test_transition_scaling_fit(monkeypatch: pytest.MonkeyPatch):
    def curve(lam: float, grid: list[float], **_kwargs) -> list[PressurePoint]:
        points = [PressurePoint(lam=lam, t=t, p=Decimal(-1.5 / sqrt(t1(lam) - t)).exp()) for t in grid]
        return [*points[:-1], PressurePoint(lam=lam, t=grid[-1], p=None, status="PrecisionExhausted")]

    monkeypatch.setattr(pressure_module, "pressure_curve", curve)
    fit = transition_scaling(0.7, [1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2])
    assert fit.slope == pytest.approx(1.5, rel=1e-6)
    assert fit.intercept == pytest.approx(0, abs=1e-4)
    assert fit.points == 5
    assert fit.dropped[0][1] == "PrecisionExhausted"
    assert fit.within_bounds

    with pytest.raises(PrecisionExhaustedError):
        transition_scaling(0.7, [1e-4, 1e-3, 1e-2])

    with pytest.raises(ParameterError):
        transition_scaling(0.3, [1e-3])

    with pytest.raises(ParameterError):
        transition_scaling(0.7, [0])


@pytest.mark.slow
def test_transition_scaling():
    fit = transition_scaling(0.7, np.geomspace(1e-4, 1e-2, 9).tolist(), precision_bits=256)
    assert fit.points >= 5
    assert fit.low <= fit.slope <= fit.high
