from decimal import Decimal
from logging import getLogger
from logging import Logger
from math import log
from typing import Iterable
from typing import Sequence

import numpy as np
from mpmath import exp
from mpmath import fsum
from mpmath import mpf
from mpmath import workprec
from numpy.typing import NDArray

from fibotherm.exceptions import FibothermException
from fibotherm.exceptions import InfiniteInducingTimeError
from fibotherm.exceptions import InvariantUnavailableError
from fibotherm.exceptions import NonPositiveWeightError
from fibotherm.exceptions import ParameterError
from fibotherm.kneading import fibonacci_kneading
from fibotherm.models.plmap import GUARD_BITS
from fibotherm.models.plmap import PLMap
from fibotherm.models.thermo import ConformalSolution
from fibotherm.models.thermo import DerivativeProbe
from fibotherm.models.thermo import EquilibriumData
from fibotherm.models.thermo import ProbeRow
from fibotherm.models.thermo import PressurePoint
from fibotherm.models.thermo import ProjectionReport
from fibotherm.plmap import fibonacci_family
from fibotherm.utils.helpers import ExceptionManager
from fibotherm.walk import classify
from fibotherm.walk import GOLDEN_MEAN
from fibotherm.walk import stationary_vector

from .constants import check_parameters
from .constants import t1
from .measures import left_fraction
from .pressure import pressure_or_status
from .pressure import solve_pressure
from .weights import conformal_weights

logger: Logger = getLogger(__name__)

WEIGHT_CUTOFF: float = 1e-40


def normalising_constant(
    lam: float,
    t: float,
    p: float | Decimal,
    weights: Sequence[mpf | float],
    plmap: PLMap | None = None,
    precision_bits: int = 113,
) -> float:
    """
    Get the normalising constant M of the conformal measure of the original map projected from the induced one.

    The projection covers the first three levels of the tower over the branches, with the conformal mass of W_i equal
    to w_i / 2: M = 1 + e^p sum_{i >= 2} w_i / 2 kappa_i^t + e^(2p) sum_{i >= 3} w_i / 2 kappa_i^t kappa_0^t.
    For the geometric masses of lam^t <= 1/2 the sums are in closed form, see closed_form_normalising_constant.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param p: The pressure.
    :param weights: The conformal weights w_1, w_2, ...
    :param plmap: Optional. The Fibonacci map whose slopes kappa_i are used.
    :param precision_bits: Working precision, defaults to 113.
    :return: The constant M >= 1.
    """
    check_parameters(lam, t)
    n: int = len(weights)
    plmap = plmap if plmap and plmap.N >= n else fibonacci_family(lam, depth=max(n, 10), precision_bits=precision_bits)

    with workprec(precision_bits + GUARD_BITS):
        shift: mpf = exp(mpf(str(p)))
        kappa_0: mpf = plmap.kappa[0] ** t
        first: mpf = fsum(mpf(weights[i - 1]) / 2 * plmap.kappa[i] ** t for i in range(2, n + 1))
        second: mpf = fsum(mpf(weights[i - 1]) / 2 * plmap.kappa[i] ** t for i in range(3, n + 1))
        return float(1 + shift * first + shift**2 * second * kappa_0)


def _kept_weights(solution: ConformalSolution, depth: int) -> list[mpf]:
    if solution.status == "WentNegative":
        raise NonPositiveWeightError(f"Weight w_{solution.k0} is negative at p={solution.p}")
    largest: mpf = max(solution.weights)
    kept: list[mpf] = []
    for weight in solution.weights[:depth]:
        if weight < WEIGHT_CUTOFF * largest:
            break
        kept.append(weight)
    if bad := [k for k, w in enumerate(kept, 1) if w <= 0]:
        raise NonPositiveWeightError(f"Weight w_{bad[0]} is not positive")
    if len(kept) < 3:
        raise ParameterError(f"Only {len(kept)} weights above the cutoff")
    return kept


def transition_matrix_g(weights: Sequence[float]) -> NDArray[np.float64]:
    """
    Build the transition matrix of the induced equilibrium state from the conformal weights.

    Rows 1 and 2 are the weights; row i >= 3 is w_j / sum_{k >= i - 1} w_k for j >= i - 1.

    :param weights: The positive weights w_1..w_n.
    :return: The n x n row-stochastic matrix.
    """
    w: NDArray[np.float64] = np.asarray(weights, dtype=np.float64)
    n: int = w.size
    tails: NDArray[np.float64] = np.cumsum(w[::-1])[::-1]
    matrix: NDArray[np.float64] = np.zeros((n, n))
    matrix[0] = matrix[1] = w / w.sum()
    for row in range(2, n):
        matrix[row, row - 1 :] = w[row - 1 :] / tails[row - 1]
    return matrix


def equilibrium_data(
    lam: float,
    t: float,
    p: float | Decimal | None = None,
    *,
    depth: int = 200,
    precision_bits: int = 113,
    tolerance: float = 1e-12,
    bisection_tolerance: float = 1e-20,
    power_tolerance: float = 1e-13,
    power_max_iterations: int = 100_000,
    max_depth: int = 4000,
) -> EquilibriumData:
    """
    Build the invariant measure of the induced map from the conformal weights at the pressure.

    The weights are truncated where they fall below 1e-40 times the largest. The stationary vector is found by power
    iteration from the first state.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param p: Optional. The pressure, solved when omitted.
    :param depth: The largest number of states, defaults to 200.
    :param precision_bits: Working precision of the weights, defaults to 113.
    :param tolerance: The largest accepted |H - 1|, defaults to 1e-12.
    :param bisection_tolerance: The relative bracket width of the pressure solver, defaults to 1e-20.
    :param power_tolerance: The l1 tolerance of the power iteration, defaults to 1e-13.
    :param power_max_iterations: The iteration budget of the power iteration, defaults to 100000.
    :param max_depth: The largest index of the weight recursion, defaults to 4000.
    :raises InvariantUnavailableError: If p = 0 and lam^t >= 1/2.
    :raises NonPositiveWeightError: If a kept weight is not positive.
    :raises NoConvergenceError: If the power iteration does not converge.
    :return: An EquilibriumData object.
    """
    check_parameters(lam, t)
    if p is None:
        p = solve_pressure(
            lam,
            t,
            precision_bits=precision_bits,
            bisection_tolerance=bisection_tolerance,
            tolerance=tolerance,
            max_depth=max_depth,
        ).p
    if p == 0 and lam**t >= 0.5:
        raise InvariantUnavailableError(f"No invariant probability at p=0 for lambda^t={lam**t} >= 1/2")

    solution: ConformalSolution = conformal_weights(
        lam,
        t,
        p,
        20,
        precision_bits=precision_bits,
        tolerance=tolerance,
        max_depth=max_depth,
    )
    kept: list[mpf] = _kept_weights(solution, depth)
    n: int = len(kept)
    weights: NDArray[np.float64] = np.array([float(w) for w in kept])

    matrix: NDArray[np.float64] = transition_matrix_g(weights)
    v: NDArray[np.float64] = stationary_vector(matrix, power_tolerance, power_max_iterations, np.eye(n)[0])

    log_s: NDArray[np.float64] = np.full(n, -log(lam * (1 - lam)))
    log_s[0] = -log(1 - lam)
    times: NDArray[np.float64] = np.array(fibonacci_kneading(n).S[:n], dtype=np.float64)
    plogp: NDArray[np.float64] = np.where(matrix > 0, matrix * np.log(np.where(matrix > 0, matrix, 1)), 0)

    entropy: float = float(-(v @ plogp.sum(axis=1)))
    lyap: float = float(v @ log_s)
    mean_time: float = float(v @ times)
    residual: float = float(entropy + v @ (-t * log_s - float(p) * times))

    with workprec(precision_bits + GUARD_BITS):
        missing: float = max(float(1 - fsum(kept)), 0.0)
    entropy_error: float = missing * (1 - log(missing)) if missing > 0 else 0.0

    plmap: PLMap = fibonacci_family(lam, depth=max(n, 10), precision_bits=precision_bits)

    logger.debug(f"Equilibrium at lambda={lam}, t={t} on {n} states: h={entropy:.6g}, Lambda={mean_time:.6g}")

    return EquilibriumData(
        lam=lam,
        t=t,
        p=p if isinstance(p, Decimal) else Decimal(str(p)),
        G=matrix,
        weights=weights,
        v=v,
        entropy=entropy,
        entropy_error=entropy_error,
        lyap=lyap,
        Lambda=mean_time,
        density=v / weights,
        M=normalising_constant(lam, t, p, kept, plmap, precision_bits),
        zeta=left_fraction(plmap, tuple(v)),
        residual=residual,
    )


def pressure_identity_residual(lam: float, t: float, p: float | Decimal | None = None, **kwargs) -> float:
    """
    Get h + sum_i v_i (-t log s_i - p S_{i-1}) for the equilibrium state at the solved pressure, which vanishes when p
    is the pressure.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param p: Optional. The value of p in the identity, defaults to the solved pressure.
    :param kwargs: Options passed to ``equilibrium_data``.
    :return: The residual.
    """
    data: EquilibriumData = equilibrium_data(lam, t, **kwargs)
    if p is None:
        return data.residual
    return data.residual + (float(data.p) - float(p)) * data.Lambda


def project_measures(lam: float, t: float, **kwargs) -> ProjectionReport:
    """
    Project the induced equilibrium state to the original map with the Abramov formula.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param kwargs: Options passed to ``equilibrium_data``.
    :raises InfiniteInducingTimeError: If the mean inducing time diverges.
    :return: A ProjectionReport object.
    """
    check_parameters(lam, t)
    lam_t: float = lam**t
    if t >= t1(lam) and (lam_t >= 0.5 or GOLDEN_MEAN * lam_t / (1 - lam_t) >= 1):
        raise InfiniteInducingTimeError(f"The mean inducing time diverges at lambda={lam}, t={t}")

    data: EquilibriumData = equilibrium_data(lam, t, **kwargs)
    entropy: float = data.entropy / data.Lambda
    lyapunov: float = data.lyap / data.Lambda

    return ProjectionReport(
        lam=lam,
        t=t,
        p=data.p,
        M=data.M,
        Lambda=data.Lambda,
        entropy=entropy,
        lyapunov=lyapunov,
        abramov_defect=entropy - t * lyapunov - float(data.p),
    )


def lambda_profile(lam: float, t_grid: Iterable[float], **kwargs) -> list[tuple[float, float]]:
    """
    Get the mean inducing time of the equilibrium state along a grid of inverse temperatures below t1.

    :param lam: The parameter, in (0, 1).
    :param t_grid: The inverse temperatures.
    :param kwargs: Options passed to ``equilibrium_data``.
    :return: A list of (t, Lambda) pairs.
    """
    return [(t, equilibrium_data(lam, t, **kwargs).Lambda) for t in t_grid]


def left_derivative_probe(
    lam: float,
    deltas: Iterable[float],
    *,
    precision_bits: int = 113,
    bisection_tolerance: float = 1e-20,
    tolerance: float = 1e-12,
    max_depth: int = 4000,
) -> DerivativeProbe:
    """
    Estimate the left derivative of the pressure at t1 with the difference quotients (p(t1) - p(t1 - delta)) / delta,
    together with the mean inducing time at t1 - delta.

    :param lam: The parameter, in (0, 1).
    :param deltas: The positive steps below t1.
    :param precision_bits: Working precision, defaults to 113.
    :param bisection_tolerance: The relative bracket width of the pressure solver, defaults to 1e-20.
    :param tolerance: The largest accepted |H - 1|, defaults to 1e-12.
    :param max_depth: The largest index of the weight recursion, defaults to 4000.
    :raises ParameterError: If lam lies outside (0, 1) or a step is not positive.
    :return: A DerivativeProbe object.
    """
    check_parameters(lam)
    threshold: float = t1(lam)
    rows: list[ProbeRow] = []
    options: dict[str, int | float] = {
        "precision_bits": precision_bits,
        "tolerance": tolerance,
        "max_depth": max_depth,
    }

    for delta in deltas:
        if delta <= 0:
            raise ParameterError(f"Steps must be positive, got {delta}")
        t: float = threshold - delta
        point: PressurePoint = pressure_or_status(lam, t, precision_bits, bisection_tolerance, tolerance, max_depth)
        if point.p is None:
            rows.append(ProbeRow(delta=delta, t=t, p=None, slope=None, Lambda=None, status=point.status))
            continue
        mean_time: float | None = None
        with ExceptionManager(FibothermException) as exception:
            mean_time = equilibrium_data(lam, t, point.p, **options).Lambda
        rows.append(
            ProbeRow(
                delta=delta,
                t=t,
                p=point.p,
                slope=-float(point.p) / delta,
                Lambda=mean_time,
                status=exception.status,
            )
        )

    return DerivativeProbe(lam=lam, t1=threshold, regime=classify(lam), rows=tuple(rows))
