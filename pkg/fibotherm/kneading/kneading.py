from functools import lru_cache
from math import floor
from typing import Sequence

from fibotherm.exceptions import KneadingIndexError
from fibotherm.exceptions import ParameterError
from fibotherm.models.kneading import AdmissibilityReport
from fibotherm.models.kneading import KneadingData


def _cutting_times(q: Sequence[int]) -> tuple[int, ...]:
    s: list[int] = [1]
    for k in range(1, len(q)):
        s.append(s[k - 1] + s[q[k]])
    return tuple(s)


def kneading_from_sequence(values: Sequence[int]) -> KneadingData:
    """
    Build kneading data from the values Q(1), ..., Q(K).

    :param values: The kneading map values, starting at k = 1.
    :raises ParameterError: If the sequence is empty or some Q(k) is not in [0, k).
    :return: A KneadingData object.
    """
    if not values:
        raise ParameterError("The kneading map needs at least one value")
    q: tuple[int, ...] = (0, *map(int, values))
    if bad := next((k for k in range(1, len(q)) if not 0 <= q[k] < k), None):
        raise ParameterError(f"Q({bad})={q[bad]} must satisfy 0 <= Q(k) < k")
    return KneadingData(Q=q, S=_cutting_times(q), K=len(q) - 1)


@lru_cache(maxsize=32)
def fibonacci_kneading(depth: int) -> KneadingData:
    """
    Get the Fibonacci kneading map Q(k) = max(k-2, 0); its cutting times are the Fibonacci numbers 1, 2, 3, 5, 8, ...

    :param depth: The truncation depth K, at least 1.
    :raises ParameterError: If the depth is less than 1.
    :return: A KneadingData object.
    """
    if depth < 1:
        raise ParameterError(f"Depth must be at least 1, got {depth}")
    return kneading_from_sequence([max(k - 2, 0) for k in range(1, depth + 1)])


def floor_r_kneading(r: float, depth: int, prefix: int = 2) -> KneadingData:
    """
    Get the kneading map Q(k) = floor(r*k), with Q(k) = max(k-2, 0) on the first ``prefix`` indices.

    :param r: The ratio, in (0, 1).
    :param depth: The truncation depth K, at least 1.
    :param prefix: The number of leading indices that follow the Fibonacci rule, defaults to 2.
    :raises ParameterError: If r lies outside (0, 1), or the depth or prefix are invalid.
    :return: A KneadingData object.
    """
    if not 0 < r < 1:
        raise ParameterError(f"r must lie in (0, 1), got {r}")
    if depth < 1 or prefix < 0:
        raise ParameterError(f"Invalid depth {depth} or prefix {prefix}")
    return kneading_from_sequence([max(k - 2, 0) if k <= prefix else floor(r * k) for k in range(1, depth + 1)])


def check_condition_121(kneading: KneadingData, k_max: int | None = None) -> tuple[bool, int | None]:
    """
    Scan the condition Q(k+1) > Q(Q(Q(k)) + 1) for 2 <= k <= k_max.

    :param kneading: The kneading data.
    :param k_max: The last index to check, defaults to K - 1.
    :raises KneadingIndexError: If k_max + 1 lies beyond the depth of the kneading map.
    :return: A tuple with the verdict and the first failing k, or None if every index passes.
    """
    k_max = kneading.K - 1 if k_max is None else k_max
    if k_max + 1 > kneading.K:
        raise KneadingIndexError(f"Checking up to k={k_max} needs depth {k_max + 1}, got K={kneading.K}")

    for k in range(2, k_max + 1):
        if not kneading.q(k + 1) > kneading.q(kneading.q2(k) + 1):
            return False, k

    return True, None


def check_admissibility(kneading: KneadingData) -> AdmissibilityReport:
    """
    Compare {Q(k+j)} with {Q(Q(Q(k))+j)}, j >= 1, lexicographically for every k with at least one term in range.

    Comparisons that are equal up to the available depth are accepted and mark the report as qualified.

    :param kneading: The kneading data.
    :return: An AdmissibilityReport.
    """
    qualified: bool = False

    for k in range(1, kneading.K):
        start: int = kneading.q2(k)
        for j in range(1, kneading.K - k + 1):
            left, right = kneading.Q[k + j], kneading.Q[start + j]
            if left > right:
                break
            if left < right:
                return AdmissibilityReport(admissible=False, qualified=qualified, depth=kneading.K, first_failure=k)
        else:
            qualified = True

    return AdmissibilityReport(admissible=True, qualified=qualified, depth=kneading.K)


def kneading_sides(kneading: KneadingData) -> tuple[int, ...]:
    """
    Get the side of c_{S_k} relative to c for k = 0..K: 1 for right, 0 for left.

    c_1 lies right of c and the symbol at each cutting time flips the one at S_{Q(k)}.

    :param kneading: The kneading data.
    :return: A tuple of sides indexed by k.
    """
    sides: list[int] = [1]
    for k in range(1, kneading.K + 1):
        sides.append(1 - sides[kneading.Q[k]])
    return tuple(sides)
