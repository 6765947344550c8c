from decimal import Decimal

import pytest
from orjson import loads

from fibotherm.kneading import kneading_sides
from fibotherm.models.base import ReportModel
from fibotherm.models.kneading import KneadingData
from fibotherm.models.kneading import KneadingRow
from fibotherm.models.plmap import PLMap
from fibotherm.models.simulation import FrequencyTest
from fibotherm.models.thermo import DerivativeProbe
from fibotherm.models.thermo import PressurePoint
from fibotherm.models.thermo import ProbeRow
from fibotherm.models.thermo import ProjectionReport
from fibotherm.models.thermo import TransitionScaling
from fibotherm.models.verify import CheckResult
from fibotherm.models.verify import VerifyReport
from fibotherm.plmap import branch_table
from fibotherm.plmap import evaluate_point
from fibotherm.plmap import verify_conditions
from fibotherm.simulation import simulate_orbit
from fibotherm.simulation import simulate_walk
from fibotherm.thermo import classify_recurrence
from fibotherm.thermo import closed_form_measures
from fibotherm.thermo import dimension_report
from fibotherm.thermo import gurevich_diagnostic
from fibotherm.thermo import pressure_bounds
from fibotherm.thermo import thermo_constants
from fibotherm.thermo import uk_recursion
from fibotherm.utils.io import load_reports
from fibotherm.utils.io import render_json
from fibotherm.walk import classify_grid
from fibotherm.walk import closed_form_stationary
from fibotherm.walk import tail_expectation


@pytest.fixture(scope="module")
def reports(map_03: PLMap, fibonacci_40: KneadingData) -> list[ReportModel]:
    sides: tuple[int, ...] = kneading_sides(fibonacci_40)
    check = CheckResult(name="stationary", description="Stationary vector", passed=True, value=1e-12, limit="<= 1e-10")
    return [
        KneadingRow(k=3, Q=fibonacci_40.Q[3], S=fibonacci_40.S[3], side=sides[3]),
        verify_conditions(map_03, 20),
        verify_conditions(map_03, 20).checks[3],
        branch_table(map_03)[4],
        evaluate_point(map_03, 0.4),
        classify_grid([0.3])[0],
        tail_expectation(0.3, fibonacci_40.S, closed_form_stationary(0.3, 30).tolist(), 30),
        thermo_constants(0.7, 0.8),
        PressurePoint(
            lam=0.3, t=0.8, p=Decimal("0.125"), residual=1e-14, bracket=(Decimal("0.1"), Decimal("0.125"))
        ),
        PressurePoint(lam=0.7, t=0.88, p=None, lower_factor=1e-40, upper_factor=1e-20, status="PrecisionExhausted"),
        pressure_bounds(0.7, 0.85),
        TransitionScaling(
            lam=0.7,
            slope=1.4,
            intercept=2.5,
            gamma=0.77,
            low=0.58,
            high=2.66,
            points=8,
            dropped=((0.88, "PrecisionExhausted"),),
        ),
        uk_recursion(0.3, 0.8, 0.1, 10),
        closed_form_measures(0.3, 1.0, 20, map_03),
        ProjectionReport(
            lam=0.3, t=0.8, p=Decimal("0.125"), M=1.4, Lambda=2.1, entropy=0.9, lyapunov=1.2, abramov_defect=1e-9
        ),
        classify_recurrence(0.3, 1.2, 0.1),
        gurevich_diagnostic(0.3, 0.8, 0.1, n_max=5, depth=1),
        DerivativeProbe(
            lam=0.3,
            t1=1.0,
            regime="Acip",
            rows=(
                ProbeRow(delta=0.1, t=0.9, p=Decimal("0.05"), slope=-0.5, Lambda=2.0),
                ProbeRow(delta=0.05, t=0.95, p=None, slope=None, Lambda=None, status="NoConvergence"),
            ),
        ),
        dimension_report(0.6),
        simulate_walk(0.3, 100, 50, seed=1),
        simulate_orbit(map_03, "0.4", 5),
        FrequencyTest(state=1, count=200, statistic=3.5, dof=4, p_value=0.48, passed=True),
        check,
        VerifyReport(precision_bits=113, checks=(check,)),
    ]


def test_report_json_round_trip(reports: list[ReportModel]):
    for report in reports:
        restored = type(report).model_validate(loads(render_json(report)))
        assert restored == report, type(report).__name__


def test_report_list_round_trip(reports: list[ReportModel]):
    rows = [r for r in reports if isinstance(r, PressurePoint)]
    assert load_reports(render_json(rows), PressurePoint) == rows
