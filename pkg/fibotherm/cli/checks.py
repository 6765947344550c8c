from decimal import Decimal
from logging import getLogger
from logging import Logger
from math import isfinite
from time import perf_counter
from typing import Callable
from typing import NamedTuple

import numpy as np
from mpmath import mpf
from mpmath import workprec
from numpy.random import Generator
from numpy.random import Philox

from fibotherm.exceptions import FibothermException
from fibotherm.models.config import RunConfig
from fibotherm.models.plmap import GUARD_BITS
from fibotherm.models.plmap import PLMap
from fibotherm.models.thermo import PressurePoint
from fibotherm.models.verify import CheckResult
from fibotherm.models.verify import VerifyReport
from fibotherm.plmap import critical_derivative_check
from fibotherm.plmap import critical_order
from fibotherm.plmap import eval_F_iterate
from fibotherm.plmap import eval_F_linear
from fibotherm.plmap import fibonacci_family
from fibotherm.plmap import required_precision
from fibotherm.plmap import verify_conditions
from fibotherm.simulation import simulate_walk
from fibotherm.thermo import closed_form_measures
from fibotherm.thermo import closed_form_weights_p0
from fibotherm.thermo import equilibrium_data
from fibotherm.thermo import first_negative
from fibotherm.thermo import gurevich_diagnostic
from fibotherm.thermo import k0_estimate
from fibotherm.thermo import LAMBDA_STAR
from fibotherm.thermo import pressure_curve
from fibotherm.thermo import pressure_identity_residual
from fibotherm.thermo import pressure_or_status
from fibotherm.thermo import project_measures
from fibotherm.thermo import root_case
from fibotherm.thermo import t1
from fibotherm.thermo import t2
from fibotherm.thermo import transition_scaling
from fibotherm.utils.functions import linspace
from fibotherm.utils.helpers import ExceptionManager
from fibotherm.walk import build_walk_model
from fibotherm.walk import classify
from fibotherm.walk import closed_form_stationary

logger: Logger = getLogger(__name__)

LINEARITY_SAMPLES: int = 100
SCALING_PRECISION: int = 256


class Outcome(NamedTuple):
    passed: bool
    value: float | None = None
    detail: str | None = None


class Check(NamedTuple):
    name: str
    description: str
    limit: str
    run: Callable[[RunConfig], Outcome]


def _solver_options(config: RunConfig) -> dict[str, float | int]:
    return {
        "precision_bits": config.precision_bits,
        "bisection_tolerance": config.bisection_tolerance,
        "tolerance": config.weights_tail_tolerance,
        "max_depth": config.max_weight_depth,
    }


def _equilibrium_options(config: RunConfig) -> dict[str, float | int]:
    return _solver_options(config) | {
        "depth": config.depth,
        "power_tolerance": config.power_tolerance,
        "power_max_iterations": config.power_max_iterations,
    }


def _branch_linearity(config: RunConfig) -> Outcome:
    rng: Generator = Generator(Philox(config.seed))
    worst: float = 0

    for lam in (0.3, 0.5, 0.7):
        plmap: PLMap = fibonacci_family(lam, config.depth, config.precision_bits)
        if (bits := max(required_precision(plmap, j) for j in range(1, 13))) > plmap.precision_bits:
            logger.info(f"Rebuilding the map for lambda={lam} at {bits} bits")
            plmap = fibonacci_family(lam, config.depth, bits)

        for j in range(1, 13):
            for u in rng.uniform(0.01, 0.99, LINEARITY_SAMPLES):
                with workprec(plmap.precision_bits + GUARD_BITS):
                    x: mpf = plmap.z[j - 1] + mpf(u) * (plmap.z[j] - plmap.z[j - 1])
                    linear, _ = eval_F_linear(plmap, x)
                    worst = max(worst, float(abs(linear - eval_F_iterate(plmap, x)) / abs(linear)))

    return Outcome(worst <= 1e-9, worst)


def _construction_conditions(config: RunConfig) -> Outcome:
    margin: float = float("inf")
    failures: list[str] = []

    for lam in linspace(0.05, 0.95, 19):
        lam = round(lam, 12)
        report = verify_conditions(fibonacci_family(lam, max(config.depth, 60), config.precision_bits), 40)
        margin = min(margin, *(c.margin for c in report.checks))
        if not report.passed:
            failures.append(f"lambda={lam} j={report.first_failure}")

    return Outcome(not failures, margin, ", ".join(failures) or None)


def _stationary_closed_form(config: RunConfig) -> Outcome:
    worst: float = 0

    for lam in (0.2, 0.3, 0.4):
        model = build_walk_model(
            lam,
            depth=200,
            tolerance=config.power_tolerance,
            max_iterations=config.power_max_iterations,
        )
        if model.v is None:
            return Outcome(False, None, f"no stationary vector for lambda={lam}")
        worst = max(worst, float(np.max(np.abs(model.v - closed_form_stationary(lam, 200)))))

    return Outcome(worst <= 1e-10, worst)


def _regime_boundaries(_config: RunConfig) -> Outcome:
    expected: list[tuple[float, str]] = [
        (LAMBDA_STAR - 1e-6, "Acip"),
        (LAMBDA_STAR + 1e-6, "SigmaFiniteInfinite"),
        (0.5, "SigmaFiniteInfinite"),
        (0.5 + 1e-6, "WildAttractor"),
    ]
    wrong: list[str] = [f"{lam}: {classify(lam)}" for lam, regime in expected if classify(lam) != regime]
    deviation: float = max(abs(critical_order(0.5) - 5), abs(critical_order(LAMBDA_STAR) - 4))
    return Outcome(not wrong and deviation <= 1e-12, deviation, ", ".join(wrong) or None)


def _pressure_transition(config: RunConfig) -> Outcome:
    worst: float = 0
    problems: list[str] = []

    for lam in (0.3, 0.45, 0.6, 0.7):
        transition: float = t1(lam)
        above: list[PressurePoint] = pressure_curve(
            lam,
            linspace(transition, transition + 1, 20),
            jobs=config.threads,
            **_solver_options(config),
        )
        below: list[PressurePoint] = pressure_curve(
            lam,
            linspace(0.3 * transition, 0.95 * transition, 20),
            jobs=config.threads,
            **_solver_options(config),
        )

        if any(point.p != 0 for point in above):
            problems.append(f"lambda={lam}: nonzero pressure above t1")
        if failed := [point for point in below if point.p is None]:
            problems.append(f"lambda={lam}: {failed[0].status} at t={failed[0].t}")
            continue
        if any(point.p <= 0 for point in below):
            problems.append(f"lambda={lam}: nonpositive pressure below t1")
        if any(b.p >= a.p for a, b in zip(below, below[1:])):
            problems.append(f"lambda={lam}: pressure not decreasing")
        worst = max(worst, *(point.residual or 0 for point in below))

    return Outcome(not problems and worst < 1e-12, worst, "; ".join(problems) or None)


def _equilibrium_identity(config: RunConfig) -> Outcome:
    worst: float = 0
    for lam, t in ((0.3, 0.8), (0.45, 0.9)):
        worst = max(
            worst,
            pressure_identity_residual(lam, t, **_equilibrium_options(config)),
            abs(project_measures(lam, t, **_equilibrium_options(config)).abramov_defect),
        )
    return Outcome(worst < 1e-6, worst)


def _transition_scaling(config: RunConfig) -> Outcome:
    fit = transition_scaling(
        0.7,
        np.geomspace(1e-4, 1e-2, 9).tolist(),
        jobs=config.threads,
        **(_solver_options(config) | {"precision_bits": max(config.precision_bits, SCALING_PRECISION)}),
    )
    detail: str = f"intercept={fit.intercept:.4g} range=[{fit.low:.4g}, {fit.high:.4g}] points={fit.points}"
    if fit.dropped:
        detail += f" dropped={len(fit.dropped)} ({fit.dropped[0][1]} at t={fit.dropped[0][0]})"
    return Outcome(fit.within_bounds, fit.slope, detail)


def _k0_pairs() -> list[tuple[float, float]]:
    pairs: list[tuple[float, float]] = []
    for lam in (0.2, 0.3, 0.4, 0.45):
        pairs.extend((lam, t2(lam) + f * (1 - t2(lam))) for f in (0.3, 0.7))
        pairs.append((lam, t2(lam)))
    for lam in (0.3, 0.45, 0.6, 0.7):
        pairs.extend((lam, f * t2(lam)) for f in (0.5, 0.9))
    return pairs


def _k0_agreement(config: RunConfig) -> Outcome:
    worst: int = 0
    cases: set[str] = set()

    for lam, t in _k0_pairs():
        estimate: int = k0_estimate(lam, t)
        exact: int | None = first_negative(closed_form_weights_p0(lam, t, max(4 * estimate, 64), config.precision_bits))
        if exact is None:
            return Outcome(False, None, f"no negative weight for lambda={lam}, t={t}")
        cases.add(root_case(lam, t))
        worst = max(worst, abs(exact - estimate))

    return Outcome(worst <= 2 and len(cases) == 3, worst, f"cases={','.join(sorted(cases))}")


def _walk_escape(config: RunConfig) -> Outcome:
    report = simulate_walk(0.6, 10_000, 10_000, config.seed, 50, threads=config.threads)
    return Outcome(report.escape_fraction >= 0.99, report.escape_fraction)


def _walk_occupation(config: RunConfig) -> Outcome:
    report = simulate_walk(0.4, 10_000, 100_000, config.seed, 50, threads=config.threads)
    if report.tv_distance is None:
        return Outcome(False, None, "no closed-form stationary vector")
    return Outcome(report.tv_distance < 0.02, report.tv_distance)


def _critical_derivative(config: RunConfig) -> Outcome:
    worst: float = 0
    for lam in (0.4, 0.5, 0.6):
        plmap: PLMap = fibonacci_family(lam, config.depth, config.precision_bits)
        for k in range(3, 21):
            # s_2 * s_1 at k = 3, s_{k-1} * s_{k-2} = [lam (1 - lam)]^(-2) beyond
            target: float = 1 / (lam * (1 - lam) ** 2) if k == 3 else (lam * (1 - lam)) ** -2
            worst = max(worst, abs(float(critical_derivative_check(plmap, k)) / target - 1))
    return Outcome(worst <= 1e-9, worst)


def _normalisations(config: RunConfig) -> Outcome:
    worst: float = 0
    for lam, t in ((0.3, 1.0), (0.45, 0.9), (0.7, 1.0)):
        report = closed_form_measures(lam, t, 2000)
        worst = max(worst, abs(report.conformal_total - 1), abs((report.invariant_total or 1) - 1))

    data = equilibrium_data(0.3, 0.8, **_equilibrium_options(config))
    worst = max(worst, float(np.max(np.abs(data.G.sum(axis=1) - 1))))

    resolved: np.ndarray = data.density[data.v > 1e3 * config.power_tolerance]
    increasing: bool = bool(np.all(np.diff(resolved) >= -1e-9 * resolved.max()))
    ratio: float = float(data.density.max() / data.density.min())

    return Outcome(worst <= 1e-12 and increasing and isfinite(ratio), worst, f"density max/min={ratio:.6g}")


def _gurevich(config: RunConfig) -> Outcome:
    lam: float = 0.6
    t: float = t1(lam) - 0.05
    report = gurevich_diagnostic(lam, t, n_max=15, depth=60, precision_bits=config.precision_bits)
    ratios: tuple[float, ...] = report.ratios[4:]
    shifted = gurevich_diagnostic(lam, t, report.p + Decimal("0.1"), 15, 60, precision_bits=config.precision_bits)

    passed: bool = (
        all(r <= 1e-12 for r in report.rates[4:])
        and abs(ratios[-1]) <= abs(ratios[0])
        and abs(ratios[-1]) < 0.05
        and shifted.rates[-1] <= report.rates[-1] - 0.1
    )
    return Outcome(
        passed,
        ratios[-1],
        f"ratio_5={ratios[0]:.4g} rate_15={report.rates[-1]:.4g} shifted rate_15={shifted.rates[-1]:.4g}",
    )


def _precision_target(config: RunConfig) -> Outcome:
    point: PressurePoint = pressure_or_status(0.7, t1(0.7) - 1e-4, **_solver_options(config))
    value: float | None = None if point.p is None else float(point.p)
    return Outcome(point.status in ("ok", "PrecisionExhausted"), value, point.status)


CHECKS: tuple[Check, ...] = (
    Check("branch_linearity", "Affine branches of F match composed iterates of f", "<= 1e-9", _branch_linearity),
    Check("construction_conditions", "Slope conditions of the construction, j <= 40", ">= 1", _construction_conditions),
    Check("stationary_closed_form", "Stationary vector of the walk", "<= 1e-10", _stationary_closed_form),
    Check("regime_boundaries", "Regimes and critical orders at the boundaries", "<= 1e-12", _regime_boundaries),
    Check("pressure_transition", "Pressure zero above t1, decreasing below it", "< 1e-12", _pressure_transition),
    Check("equilibrium_identity", "Pressure identity and Abramov defect", "< 1e-6", _equilibrium_identity),
    Check("transition_scaling", "Exponent of -log p against (t1 - t)^(-1/2)", "[0.75 G, 3.46 G]", _transition_scaling),
    Check("k0_agreement", "Estimated and exact first negative weight at p = 0", "<= 2", _k0_agreement),
    Check("walk_escape", "Escape fraction of the walk at lambda = 0.6", ">= 0.99", _walk_escape),
    Check("walk_occupation", "Occupation distance to the stationary vector", "< 0.02", _walk_occupation),
    Check("critical_derivative", "Derivative along the critical orbit, k = 3..20", "<= 1e-9", _critical_derivative),
    Check("normalisations", "Measures and G rows sum to one, density increasing", "<= 1e-12", _normalisations),
    Check("gurevich", "Partition sum ratios at the pressure, rates above it", "|ratio_15| < 0.05", _gurevich),
    Check("precision_target", "Pressure at t1 - 1e-4 for lambda = 0.7 or its status", "ok", _precision_target),
)

CHECK_NAMES: tuple[str, ...] = tuple(c.name for c in CHECKS)


def run_check(check: Check, config: RunConfig) -> CheckResult:
    """
    Run a single check, recording a failure if it raises.

    :param check: The check.
    :param config: The run configuration.
    :return: A CheckResult object.
    """
    start: float = perf_counter()
    outcome: Outcome = Outcome(False)

    with ExceptionManager(FibothermException, ArithmeticError, ValueError) as exception:
        outcome = check.run(config)

    if exception.exception:
        outcome = Outcome(False, None, f"{type(exception.exception).__name__}: {exception.exception}")

    return CheckResult(
        name=check.name,
        description=check.description,
        passed=outcome.passed,
        value=outcome.value,
        limit=check.limit,
        seconds=round(perf_counter() - start, 3),
        detail=outcome.detail,
    )


def run_checks(config: RunConfig, names: tuple[str, ...] = (), log: Logger | None = None) -> VerifyReport:
    """
    Run the verification suite.

    :param config: The run configuration.
    :param names: Optional. The names of the checks to run, defaults to all of them.
    :param log: Optional. A logger that receives one line per check.
    :return: A VerifyReport object.
    """
    results: list[CheckResult] = []

    for check in CHECKS:
        if names and check.name not in names:
            continue
        result: CheckResult = run_check(check, config)
        results.append(result)
        if log:
            verdict: str = "PASS" if result.passed else "FAIL"
            log.info(f"verify:{result.name} {verdict} value={result.value} time={result.seconds}s")

    return VerifyReport(precision_bits=config.precision_bits, checks=tuple(results))
