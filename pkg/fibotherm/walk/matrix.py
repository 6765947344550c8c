from logging import getLogger
from logging import Logger

import numpy as np
from numpy.typing import NDArray

from fibotherm.exceptions import KneadingIndexError
from fibotherm.exceptions import NoConvergenceError
from fibotherm.exceptions import ParameterError
from fibotherm.kneading import fibonacci_kneading
from fibotherm.models.kneading import KneadingData
from fibotherm.models.plmap import PLMap

logger: Logger = getLogger(__name__)

DEFICIT_TOLERANCE: float = 1e-12


def transition_rows(
    lam: float | None,
    kneading: KneadingData | None,
    depth: int,
    plmap: PLMap | None = None,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Build the truncated transition matrix of the induced map and the mass each row loses to the truncation.

    Without a map, the lengths are epsilon_j proportional to lam^j and row i is (1 - lam) * lam^(j - Q(i) - 1) for
    j > Q(i). With a map, row i is epsilon_j / sum_{k > Q(i)} epsilon_k for j > Q(i). Rows are renormalised over the
    states 1..N, and a warning names the first state whose row lost at least 1e-12.

    :param lam: The parameter of the geometric lengths; ignored when a map is given.
    :param kneading: The kneading data, defaults to the kneading of the map or to the Fibonacci kneading.
    :param depth: The number of states N.
    :param plmap: Optional. The map whose lengths are used.
    :raises ParameterError: If lam lies outside (0, 1) without a map, or the depth is below 10.
    :raises KneadingIndexError: If the kneading data or the map are shorter than the depth.
    :return: A tuple with the matrix and the deficit of each row.
    """
    if depth < 10:
        raise ParameterError(f"Depth must be at least 10, got {depth}")
    kneading = kneading or (plmap.kneading if plmap else fibonacci_kneading(depth))
    if kneading.K < depth or (plmap and plmap.N < depth):
        raise KneadingIndexError(f"Depth {depth} exceeds the available kneading or map depth")

    q: NDArray[np.int64] = np.array(kneading.Q[1 : depth + 1], dtype=np.int64)
    columns: NDArray[np.int64] = np.arange(1, depth + 1, dtype=np.int64)
    allowed: NDArray[np.bool_] = columns[None, :] > q[:, None]

    if plmap is None:
        if lam is None or not 0 < lam < 1:
            raise ParameterError(f"lambda must lie in (0, 1), got {lam}")
        steps: NDArray[np.int64] = np.where(allowed, columns[None, :] - q[:, None] - 1, 0)
        matrix: NDArray[np.float64] = np.where(allowed, (1 - lam) * lam**steps, 0.0)
    else:
        eps: NDArray[np.float64] = np.array([float(e) for e in plmap.eps[1 : depth + 1]])
        tails: NDArray[np.float64] = np.array([float(plmap.tail[i]) for i in q])
        matrix = np.where(allowed, eps[None, :] / tails[:, None], 0.0)

    sums: NDArray[np.float64] = matrix.sum(axis=1)
    deficit: NDArray[np.float64] = np.clip(1 - sums, 0, None)
    if (lost := np.flatnonzero(deficit >= DEFICIT_TOLERANCE)).size:
        logger.warning(
            f"{lost.size} of {depth} rows lose at least {DEFICIT_TOLERANCE:g} to the truncation, "
            f"from state {lost[0] + 1}"
        )
    return matrix / sums[:, None], deficit


def transition_matrix(
    lam: float | None,
    kneading: KneadingData | None = None,
    depth: int = 200,
    plmap: PLMap | None = None,
) -> NDArray[np.float64]:
    """
    Build the row-stochastic transition matrix A of the induced map on the states 1..N.

    :param lam: The parameter of the geometric lengths; ignored when a map is given.
    :param kneading: Optional. The kneading data, defaults to the Fibonacci kneading.
    :param depth: The number of states N, defaults to 200.
    :param plmap: Optional. The map whose lengths are used.
    :return: The N x N matrix; entry [i-1, j-1] is A_{i,j}.
    """
    return transition_rows(lam, kneading, depth, plmap)[0]


def stationary_vector(
    matrix: NDArray[np.float64],
    tolerance: float = 1e-13,
    max_iterations: int = 100_000,
    start: NDArray[np.float64] | None = None,
) -> NDArray[np.float64]:
    """
    Find the stationary probability vector of a stochastic matrix by power iteration.

    The iteration starts from the given distribution, or the uniform distribution on the first 10 states, and stops
    when ||vA - v||_1 is below the tolerance.

    :param matrix: The row-stochastic matrix.
    :param tolerance: The l1 tolerance, defaults to 1e-13.
    :param max_iterations: The iteration budget, defaults to 100000.
    :param start: Optional. The initial distribution.
    :raises NoConvergenceError: If the tolerance is not reached within the budget.
    :return: The stationary vector.
    """
    size: int = matrix.shape[0]
    v: NDArray[np.float64]
    if start is None:
        v = np.zeros(size)
        v[: min(10, size)] = 1 / min(10, size)
    else:
        v = np.asarray(start, dtype=np.float64) / np.sum(start)

    for iteration in range(1, max_iterations + 1):
        w: NDArray[np.float64] = v @ matrix
        w /= w.sum()
        if np.abs(w - v).sum() < tolerance:
            logger.debug(f"Power iteration converged after {iteration} iterations")
            if (edge := w[size - size // 10 :].sum()) > 1e-6:
                logger.warning(f"Stationary mass {edge:.3e} piles up at the truncation edge")
            return w
        v = w

    raise NoConvergenceError(f"Power iteration did not reach {tolerance} within {max_iterations} iterations")


def row_moments(matrix: NDArray[np.float64], k: int) -> tuple[float, float]:
    """
    Get the expected increment and the expected squared increment of the state from row k.

    :param matrix: The transition matrix.
    :param k: The state, 1-based.
    :raises ParameterError: If k is not a state of the matrix.
    :return: A tuple with sum_j (j - k) A_{k,j} and sum_j (j - k)^2 A_{k,j}.
    """
    if not 1 <= k <= matrix.shape[0]:
        raise ParameterError(f"State {k} is not in 1..{matrix.shape[0]}")
    increments: NDArray[np.float64] = np.arange(1, matrix.shape[0] + 1) - k
    row: NDArray[np.float64] = matrix[k - 1]
    return float(row @ increments), float(row @ increments**2)
