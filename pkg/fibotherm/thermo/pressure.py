from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from logging import getLogger
from logging import Logger
from math import exp as float_exp
from math import pi
from math import sqrt as sqrt_float
from typing import Iterable
from typing import Sequence

import numpy as np
from mpmath import exp
from mpmath import mpf
from mpmath import sqrt
from mpmath import workprec

from fibotherm.exceptions import BracketFailureError
from fibotherm.exceptions import NoConvergenceError
from fibotherm.exceptions import ParameterError
from fibotherm.exceptions import PrecisionExhaustedError
from fibotherm.models.plmap import GUARD_BITS
from fibotherm.models.thermo import ConformalSolution
from fibotherm.models.thermo import PressurePoint
from fibotherm.models.thermo import TransitionScaling
from fibotherm.utils.helpers import ExceptionManager

from .constants import check_parameters
from .constants import log_pressure_factors
from .constants import t1
from .constants import thermo_constants
from .weights import conformal_weights
from .weights import to_decimal

logger: Logger = getLogger(__name__)

BRACKET_STEPS: int = 20
MAX_BISECTIONS: int = 2000


def _solve(
    lam: float,
    t: float,
    p: mpf,
    precision_bits: int,
    tolerance: float,
    max_depth: int,
) -> ConformalSolution:
    return conformal_weights(lam, t, p, 1, precision_bits=precision_bits, tolerance=tolerance, max_depth=max_depth)


def solve_pressure(
    lam: float,
    t: float,
    *,
    precision_bits: int = 113,
    bisection_tolerance: float = 1e-20,
    tolerance: float = 1e-12,
    max_depth: int = 4000,
) -> PressurePoint:
    """
    Find the pressure p(t) of the geometric potential of the Fibonacci map.

    For t >= t1 the pressure is 0. Below t1 it is the unique p > 0 at which every conformal weight is non-negative and
    the weights sum to one. A weight goes negative for every smaller p and the sum stays below one for every larger p,
    so the bracket is found by scaling the structural factors of the pressure bounds by powers of 2 and then bisected,
    geometrically while the ends differ by more than a factor 2.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param precision_bits: Working precision, defaults to 113.
    :param bisection_tolerance: The relative width of the final bracket, defaults to 1e-20.
    :param tolerance: The largest accepted |H - 1| at the returned pressure, defaults to 1e-12.
    :param max_depth: The largest index of the weight recursion, defaults to 4000.
    :raises ParameterError: If lam lies outside (0, 1) or t <= 0.
    :raises BracketFailureError: If no bracket is found within 2^20 of the structural factors.
    :raises PrecisionExhaustedError: If the bracket cannot be resolved at the working precision.
    :raises NoConvergenceError: If the weights or the bisection do not settle.
    :return: A PressurePoint object.
    """
    check_parameters(lam, t)

    if t >= (threshold := t1(lam)):
        residual: float | None = None
        with ExceptionManager(NoConvergenceError) as exception:
            residual = abs(float(_solve(lam, t, mpf(0), precision_bits, tolerance, max_depth).deficit))
        if exception.exception:
            logger.debug(f"No residual at lambda={lam}, t={t}: {exception.exception}")
        zero: Decimal = Decimal(0)
        return PressurePoint(lam=lam, t=t, p=zero, residual=residual, bracket=(zero, zero))

    log_lower, log_upper = sorted(log_pressure_factors(lam, t)[:2])

    with workprec(precision_bits + GUARD_BITS):
        low: mpf | None = None
        high: mpf | None = None
        high_solution: ConformalSolution | None = None

        for j in range(BRACKET_STEPS + 1):
            candidate: mpf = exp(mpf(log_lower)) / 2**j
            if _solve(lam, t, candidate, precision_bits, tolerance, max_depth).status == "WentNegative":
                low = candidate
                break
        for j in range(BRACKET_STEPS + 1):
            candidate = exp(mpf(log_upper)) * 2**j
            solution: ConformalSolution = _solve(lam, t, candidate, precision_bits, tolerance, max_depth)
            if solution.status != "WentNegative":
                high, high_solution = candidate, solution
                break

        if low is None or high is None or high_solution is None:
            raise BracketFailureError(f"No pressure bracket at lambda={lam}, t={t} within 2^{BRACKET_STEPS}")

        logger.debug(f"Pressure bracket at lambda={lam}, t={t}: [{float(low):.3e}, {float(high):.3e}]")

        resolution: mpf = mpf(2) ** (1 - precision_bits)
        monotone: bool = True

        for iteration in range(MAX_BISECTIONS):
            if high - low < bisection_tolerance * high and high_solution.deficit < tolerance:
                break
            if high - low <= resolution * high:
                raise PrecisionExhaustedError(
                    f"Pressure bracket at lambda={lam}, t={t} collapsed at {precision_bits} bits "
                    f"with |H - 1|={float(high_solution.deficit):.3e}"
                )

            middle: mpf = sqrt(low * high) if high > 2 * low else (low + high) / 2
            solution = _solve(lam, t, middle, precision_bits, tolerance, max_depth)

            if solution.status == "WentNegative":
                low = middle
                continue
            if monotone and solution.deficit > high_solution.deficit:
                monotone = False
                logger.warning(f"H(p, t) is not monotone in p on the bracket at lambda={lam}, t={t}")
            high, high_solution = middle, solution
        else:
            raise NoConvergenceError(f"Pressure bisection at lambda={lam}, t={t} did not finish")

        logger.debug(f"Pressure at lambda={lam}, t={t} after {iteration} bisections: {float(high):.6e}")

        return PressurePoint(
            lam=lam,
            t=t,
            p=to_decimal(high, precision_bits),
            residual=abs(float(high_solution.deficit)),
            bracket=(to_decimal(low, precision_bits), to_decimal(high, precision_bits)),
            lower_factor=float_exp(log_lower),
            upper_factor=float_exp(log_upper),
            status="ok",
        )


def pressure_or_status(
    lam: float,
    t: float,
    precision_bits: int = 113,
    bisection_tolerance: float = 1e-20,
    tolerance: float = 1e-12,
    max_depth: int = 4000,
) -> PressurePoint:
    """
    Solve the pressure, turning numerical failures into the status of the returned point.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param precision_bits: Working precision, defaults to 113.
    :param bisection_tolerance: The relative width of the final bracket, defaults to 1e-20.
    :param tolerance: The largest accepted |H - 1|, defaults to 1e-12.
    :param max_depth: The largest index of the weight recursion, defaults to 4000.
    :raises ParameterError: If lam lies outside (0, 1) or t <= 0.
    :return: A PressurePoint object, with p None when the solver failed.
    """
    with ExceptionManager(
        PrecisionExhaustedError,
        BracketFailureError,
        NoConvergenceError,
        ArithmeticError,
    ) as exception:
        return solve_pressure(
            lam,
            t,
            precision_bits=precision_bits,
            bisection_tolerance=bisection_tolerance,
            tolerance=tolerance,
            max_depth=max_depth,
        )

    logger.info(f"Pressure at lambda={lam}, t={t} failed: {exception.exception}")
    lower_factor: float | None = None
    upper_factor: float | None = None
    if t < t1(lam):
        lower_factor, upper_factor = (float_exp(f) for f in sorted(log_pressure_factors(lam, t)[:2]))
    return PressurePoint(
        lam=lam,
        t=t,
        p=None,
        lower_factor=lower_factor,
        upper_factor=upper_factor,
        status=exception.status,
    )


def _pressure_row(arguments: tuple[float, float, int, float, float, int]) -> PressurePoint:
    return pressure_or_status(*arguments)


def pressure_curve(
    lam: float,
    t_grid: Iterable[float],
    *,
    precision_bits: int = 113,
    bisection_tolerance: float = 1e-20,
    tolerance: float = 1e-12,
    max_depth: int = 4000,
    jobs: int = 1,
) -> list[PressurePoint]:
    """
    Compute the pressure over a grid of inverse temperatures.

    :param lam: The parameter, in (0, 1).
    :param t_grid: The inverse temperatures.
    :param precision_bits: Working precision, defaults to 113.
    :param bisection_tolerance: The relative width of the final brackets, defaults to 1e-20.
    :param tolerance: The largest accepted |H - 1|, defaults to 1e-12.
    :param max_depth: The largest index of the weight recursion, defaults to 4000.
    :param jobs: The number of worker processes, defaults to 1.
    :return: The points in the order of the grid.
    """
    arguments: list[tuple[float, float, int, float, float, int]] = [
        (lam, t, precision_bits, bisection_tolerance, tolerance, max_depth) for t in t_grid
    ]
    if jobs <= 1 or len(arguments) <= 1:
        return [_pressure_row(a) for a in arguments]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(_pressure_row, arguments))


def transition_scaling(
    lam: float,
    gaps: Sequence[float],
    *,
    precision_bits: int = 256,
    bisection_tolerance: float = 1e-20,
    tolerance: float = 1e-12,
    max_depth: int = 4000,
    jobs: int = 1,
    min_points: int = 5,
) -> TransitionScaling:
    """
    Fit -log p(t1 - g) = slope / sqrt(g) + intercept over the gaps g, for lam >= 1/2.

    Points whose pressure cannot be computed at the working precision are left out of the fit and listed in
    ``dropped``.

    :param lam: The parameter, in [1/2, 1).
    :param gaps: The distances below t1, each positive.
    :param precision_bits: Working precision, defaults to 256.
    :param bisection_tolerance: The relative width of the final brackets, defaults to 1e-20.
    :param tolerance: The largest accepted |H - 1|, defaults to 1e-12.
    :param max_depth: The largest index of the weight recursion, defaults to 4000.
    :param jobs: The number of worker processes, defaults to 1.
    :param min_points: The smallest number of points the fit accepts, defaults to 5.
    :raises ParameterError: If lam is below 1/2 or a gap is not positive.
    :raises PrecisionExhaustedError: If fewer than ``min_points`` pressures could be computed.
    :return: A TransitionScaling object.
    """
    if not 0.5 <= lam < 1:
        raise ParameterError(f"The exponential scaling needs lambda in [1/2, 1), got {lam}")
    if any(g <= 0 for g in gaps):
        raise ParameterError("Gaps must be positive")

    transition: float = t1(lam)
    points: list[PressurePoint] = pressure_curve(
        lam,
        [transition - g for g in gaps],
        precision_bits=precision_bits,
        bisection_tolerance=bisection_tolerance,
        tolerance=tolerance,
        max_depth=max_depth,
        jobs=jobs,
    )

    fitted: list[tuple[float, PressurePoint]] = [(g, pt) for g, pt in zip(gaps, points) if pt.p]
    dropped: tuple[tuple[float, str], ...] = tuple((pt.t, pt.status) for pt in points if not pt.p)
    for t, status in dropped:
        logger.warning(f"Pressure at lambda={lam}, t={t} left out of the scaling fit: {status}")
    if len(fitted) < min_points:
        raise PrecisionExhaustedError(
            f"Only {len(fitted)} of {len(points)} pressures computed at {precision_bits} bits"
        )

    slope, intercept = np.polyfit(
        [1 / sqrt_float(g) for g, _ in fitted],
        [float(-pt.p.ln()) for _, pt in fitted],
        1,
    )
    gamma: float = thermo_constants(lam, transition).gamma

    return TransitionScaling(
        lam=lam,
        slope=float(slope),
        intercept=float(intercept),
        gamma=gamma,
        low=0.9 * 5 / 6 * gamma,
        high=1.1 * pi * gamma,
        points=len(fitted),
        dropped=dropped,
    )
