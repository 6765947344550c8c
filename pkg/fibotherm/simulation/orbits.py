from logging import getLogger
from logging import Logger
from typing import Iterable
from typing import Sequence

import numpy as np
from mpmath import mpf
from mpmath import workprec
from numpy.random import Generator
from numpy.random import Philox
from numpy.typing import NDArray
from scipy.stats import chi2

from fibotherm.exceptions import BoundaryPointError
from fibotherm.exceptions import DepthExceededError
from fibotherm.exceptions import OutsideDomainError
from fibotherm.exceptions import ParameterError
from fibotherm.models.base import mpf_text
from fibotherm.models.kneading import KneadingData
from fibotherm.models.plmap import GUARD_BITS
from fibotherm.models.plmap import PLMap
from fibotherm.models.simulation import FrequencyTest
from fibotherm.models.simulation import OrbitReport
from fibotherm.plmap import eval_F_linear
from fibotherm.utils.helpers import ExceptionManager
from fibotherm.walk import transition_rows

logger: Logger = getLogger(__name__)


def random_starts(plmap: PLMap, count: int, seed: int) -> list[mpf]:
    """
    Draw starting points uniformly from the domain (z_0, 1 - z_0) of the induced map.

    :param plmap: The map.
    :param count: The number of points.
    :param seed: The seed of the Philox generator.
    :return: The points.
    """
    rng: Generator = Generator(Philox(seed))
    with workprec(plmap.precision_bits + GUARD_BITS):
        return [plmap.c + (2 * mpf(u) - 1) * plmap.tail[0] for u in rng.random(count)]


def simulate_orbit(plmap: PLMap, x0: float | mpf, n_returns: int) -> OrbitReport:
    """
    Follow the orbit of x0 under the induced map and record the branch of each return.

    An orbit that comes closer to c than z_N has escaped into the unresolved tail; this is reported, not raised.

    :param plmap: The map.
    :param x0: The starting point, in (z_0, 1 - z_0).
    :param n_returns: The number of returns.
    :raises ParameterError: If n_returns is negative.
    :return: An OrbitReport object.
    """
    if n_returns < 0:
        raise ParameterError(f"The number of returns must be non-negative, got {n_returns}")

    branches: list[int] = []
    x: mpf = mpf(x0)

    with ExceptionManager(DepthExceededError, BoundaryPointError, OutsideDomainError) as exception:
        for _ in range(n_returns):
            x, info = eval_F_linear(plmap, x)
            branches.append(info.j)

    return OrbitReport(
        x0=mpf_text(mpf(x0), 20),
        branches=tuple(branches),
        returns=len(branches),
        escaped=isinstance(exception.exception, DepthExceededError),
        status=exception.status,
    )


def orbit_escape_fraction(plmap: PLMap, starts: Iterable[float | mpf], n_returns: int) -> float:
    """
    Get the fraction of orbits that come closer to c than z_N within n_returns returns.

    :param plmap: The map.
    :param starts: The starting points.
    :param n_returns: The number of returns.
    :return: The fraction of escaped orbits.
    """
    reports: list[OrbitReport] = [simulate_orbit(plmap, x, n_returns) for x in starts]
    return sum(r.escaped for r in reports) / len(reports) if reports else 0.0


def branch_histogram(branches: Sequence[int], bins: int) -> NDArray[np.float64]:
    """
    Get the frequencies of the branches 1..bins, followed by the frequency of all larger branches.

    :param branches: The visited branches.
    :param bins: The number of branches with their own bin.
    :return: The frequencies.
    """
    indices: NDArray[np.int64] = np.minimum(np.asarray(branches, dtype=np.int64), bins + 1) - 1
    counts: NDArray[np.int64] = np.bincount(indices, minlength=bins + 1)
    return counts / max(counts.sum(), 1)


def transition_frequency_test(
    orbits: Sequence[Sequence[int]],
    lam: float | None = None,
    *,
    kneading: KneadingData | None = None,
    plmap: PLMap | None = None,
    states: Sequence[int] = (1, 2, 3),
    alpha: float = 0.01,
    min_expected: float = 5.0,
) -> list[FrequencyTest]:
    """
    Test the observed successors of the given states against the rows of the transition matrix.

    Successor bins are taken in order from Q(i) + 1 while the expected count is at least ``min_expected``; the last
    bin collects all larger successors.

    :param orbits: The branch sequences of one or more orbits.
    :param lam: The parameter of the geometric lengths; ignored when a map is given.
    :param kneading: Optional. The kneading data, defaults to the Fibonacci kneading.
    :param plmap: Optional. The map whose lengths give the transition matrix.
    :param states: The states to test, defaults to (1, 2, 3).
    :param alpha: The significance level, defaults to 0.01.
    :param min_expected: The smallest expected count of a bin, defaults to 5.
    :raises ParameterError: If a state has too few transitions for two bins.
    :return: One FrequencyTest per state.
    """
    depth: int = plmap.N if plmap else max([200, *(max(o, default=0) for o in orbits)])
    matrix, _ = transition_rows(lam, kneading, depth, plmap)
    pairs: list[NDArray[np.int64]] = [np.asarray(o, dtype=np.int64) for o in orbits if len(o) > 1]
    sources: NDArray[np.int64] = np.concatenate([o[:-1] for o in pairs]) if pairs else np.zeros(0, dtype=np.int64)
    targets: NDArray[np.int64] = np.concatenate([o[1:] for o in pairs]) if pairs else np.zeros(0, dtype=np.int64)
    results: list[FrequencyTest] = []

    for state in states:
        successors: NDArray[np.int64] = targets[sources == state]
        count: int = int(successors.size)
        expected: list[float] = []
        observed: list[int] = []
        for column in np.flatnonzero(matrix[state - 1]):
            if (e := count * matrix[state - 1, column]) < min_expected:
                break
            expected.append(e)
            observed.append(int((successors == column + 1).sum()))
        if len(expected) < 2:
            raise ParameterError(f"Too few transitions from state {state} for a frequency test: {count}")
        expected[-1] = count - sum(expected[:-1])
        observed[-1] = count - sum(observed[:-1])

        statistic: float = float(sum((o - e) ** 2 / e for o, e in zip(observed, expected, strict=True)))
        dof: int = len(expected) - 1
        p_value: float = float(chi2.sf(statistic, dof))
        results.append(
            FrequencyTest(
                state=state,
                count=count,
                statistic=statistic,
                dof=dof,
                p_value=p_value,
                passed=p_value >= alpha,
            )
        )

    return results
