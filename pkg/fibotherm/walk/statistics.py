from logging import getLogger
from logging import Logger
from math import log
from math import sqrt
from typing import Iterable
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from fibotherm.exceptions import NoConvergenceError
from fibotherm.exceptions import ParameterError
from fibotherm.kneading import fibonacci_kneading
from fibotherm.models.kneading import KneadingData
from fibotherm.models.walk import ClassifyRow
from fibotherm.models.walk import TailExpectation
from fibotherm.models.walk import TRegime
from fibotherm.models.walk import WalkModel

from .matrix import stationary_vector
from .matrix import transition_rows

logger: Logger = getLogger(__name__)

GOLDEN_MEAN: float = (1 + sqrt(5)) / 2
RATIO_TOLERANCE: float = 1e-12


def _check_lambda(lam: float):
    if not 0 < lam < 1:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")


def drift(lam: float) -> float:
    """
    Get the expected increment (2 lam - 1) / (1 - lam) of the Fibonacci walk from a state k >= 2.

    :param lam: The parameter, in (0, 1).
    :raises ParameterError: If lam lies outside (0, 1).
    :return: The drift.
    """
    _check_lambda(lam)
    return (2 * lam - 1) / (1 - lam)


def second_moment(lam: float) -> float:
    """
    Get lam^2 / (1 - lam)^2 - 2 lam / (1 - lam) + 1, the square of the drift, reported as the second moment of the
    walk. The conditional moment E[(X_{n+1} - X_n)^2 | X_n = k] is conditional_second_moment.

    :param lam: The parameter, in (0, 1).
    :raises ParameterError: If lam lies outside (0, 1).
    :return: The second moment.
    """
    _check_lambda(lam)
    ratio: float = lam / (1 - lam)
    return ratio**2 - 2 * ratio + 1


def conditional_second_moment(lam: float) -> float:
    """
    Get the expected squared increment of the Fibonacci walk from a state k >= 2.

    The increment is G - 1 with G geometric, P(G = g) = (1 - lam) * lam^g, so the moment is
    lam * (1 + lam) / (1 - lam)^2 - 2 lam / (1 - lam) + 1.

    :param lam: The parameter, in (0, 1).
    :raises ParameterError: If lam lies outside (0, 1).
    :return: The conditional second moment.
    """
    _check_lambda(lam)
    return lam * (1 + lam) / (1 - lam) ** 2 - 2 * lam / (1 - lam) + 1


def log_drift(r: float, alpha: float) -> tuple[float, float]:
    """
    Get the asymptotic mean and second moment of the increment of log(state) for Q(k) = floor(r*k).

    :param r: The kneading ratio, in (0, 1).
    :param alpha: The decay exponent of the lengths, above 1.
    :raises ParameterError: If r or alpha are out of range.
    :return: A tuple with 1/(alpha-1) + log(r) and log(r)^2 + 2 log(r)/(alpha-1) + 2/(alpha-1)^2.
    """
    if not 0 < r < 1 or alpha <= 1:
        raise ParameterError(f"Need r in (0, 1) and alpha > 1, got r={r}, alpha={alpha}")
    a: float = 1 / (alpha - 1)
    return a + log(r), log(r) ** 2 + 2 * a * log(r) + 2 * a**2


def tail_ratio(lam: float) -> float:
    """Get the asymptotic ratio golden_mean * lam / (1 - lam) of the terms S_{k-1} v_k."""
    _check_lambda(lam)
    return GOLDEN_MEAN * lam / (1 - lam)


def tail_expectation(lam: float, cutting_times: Sequence[int], v: Sequence[float], depth: int) -> TailExpectation:
    """
    Sum the expected inducing time S_{k-1} v_k over k <= K.

    The measure is finite if and only if the terms decay, i.e. the asymptotic ratio is below 1.

    :param lam: The parameter, in (0, 1).
    :param cutting_times: The cutting times S_0, S_1, ...
    :param v: The stationary vector, v[k-1] being the mass of state k.
    :param depth: The number of terms K.
    :raises ParameterError: If the depth exceeds the available cutting times or stationary masses.
    :return: A TailExpectation object.
    """
    if depth > min(len(cutting_times), len(v)):
        raise ParameterError(f"Depth {depth} exceeds the available data")
    terms: NDArray[np.float64] = np.array([float(cutting_times[k - 1]) * v[k - 1] for k in range(1, depth + 1)])
    ratio: float = tail_ratio(lam)
    return TailExpectation(lam=lam, partial_sums=tuple(np.cumsum(terms).tolist()), ratio=ratio, finite=ratio < 1)


def classify(lam: float) -> TRegime:
    """
    Classify the attractor of the Fibonacci map from the sign of the drift and the tail ratio.

    :param lam: The parameter, in (0, 1).
    :raises ParameterError: If lam lies outside (0, 1).
    :return: WildAttractor for positive drift, else SigmaFiniteInfinite if the tail ratio reaches 1, else Acip.
    """
    if drift(lam) > 0:
        return "WildAttractor"
    elif tail_ratio(lam) >= 1 - RATIO_TOLERANCE:
        return "SigmaFiniteInfinite"
    return "Acip"


def closed_form_stationary(lam: float, depth: int) -> NDArray[np.float64]:
    """
    Get the stationary vector v_i = ((1 - 2 lam) / lam) * (lam / (1 - lam))^i of the Fibonacci walk.

    :param lam: The parameter, in (0, 1/2).
    :param depth: The number of states.
    :raises ParameterError: If lam is not below 1/2.
    :return: The vector v_1..v_N.
    """
    if not 0 < lam < 0.5:
        raise ParameterError(f"The stationary vector exists for lambda in (0, 1/2), got {lam}")
    return (1 - 2 * lam) / lam * (lam / (1 - lam)) ** np.arange(1, depth + 1)


def build_walk_model(
    lam: float,
    kneading: KneadingData | None = None,
    depth: int = 200,
    tolerance: float = 1e-13,
    max_iterations: int = 100_000,
) -> WalkModel:
    """
    Assemble the walk of the induced map with its statistics and regime.

    The stationary vector is only computed when the drift is negative; otherwise the chain escapes to infinity or
    is null recurrent and ``v`` is None.

    :param lam: The parameter, in (0, 1).
    :param kneading: Optional. The kneading data, defaults to the Fibonacci kneading.
    :param depth: The number of states, defaults to 200.
    :param tolerance: The l1 tolerance of the power iteration, defaults to 1e-13.
    :param max_iterations: The iteration budget of the power iteration, defaults to 100000.
    :return: A WalkModel object.
    """
    _check_lambda(lam)
    matrix, deficit = transition_rows(lam, kneading or fibonacci_kneading(depth), depth)
    v: NDArray[np.float64] | None = None

    if drift(lam) < 0:
        try:
            v = stationary_vector(matrix, tolerance, max_iterations)
        except NoConvergenceError as err:
            logger.warning(f"No stationary vector for lambda={lam}: {err}")

    return WalkModel(
        lam=lam,
        N=depth,
        A=matrix,
        deficit=deficit,
        v=v,
        drift=drift(lam),
        second_moment=second_moment(lam),
        conditional_second_moment=conditional_second_moment(lam),
        tail_ratio=tail_ratio(lam),
        regime=classify(lam),
        null_recurrent=drift(lam) == 0,
    )


def classify_grid(grid: Iterable[float]) -> list[ClassifyRow]:
    """
    Classify every parameter of a grid.

    :param grid: The parameters, in (0, 1).
    :return: A list of ClassifyRow objects in the order of the grid.
    """
    return [
        ClassifyRow(
            lam=lam,
            drift=drift(lam),
            second_moment=second_moment(lam),
            tail_ratio=tail_ratio(lam),
            regime=classify(lam),
        )
        for lam in grid
    ]
