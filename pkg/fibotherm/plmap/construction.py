from logging import getLogger
from logging import Logger
from typing import Sequence

from mpmath import fsum
from mpmath import mpf
from mpmath import workprec

from fibotherm.exceptions import ConditionFailureError
from fibotherm.exceptions import KneadingIndexError
from fibotherm.exceptions import NonSummableError
from fibotherm.exceptions import ParameterError
from fibotherm.exceptions import TailTooShortError
from fibotherm.kneading import check_condition_121
from fibotherm.kneading import fibonacci_kneading
from fibotherm.kneading import floor_r_kneading
from fibotherm.kneading import kneading_sides
from fibotherm.models.kneading import KneadingData
from fibotherm.models.plmap import ConditionCheck
from fibotherm.models.base import mpf_text
from fibotherm.models.plmap import BranchRow
from fibotherm.models.plmap import ConditionReport
from fibotherm.models.plmap import digits_for_bits
from fibotherm.models.plmap import GUARD_BITS
from fibotherm.models.plmap import PLMap
from fibotherm.models.plmap import TFamily

logger: Logger = getLogger(__name__)


def _slopes(kneading: KneadingData, eps: Sequence[mpf], tail: Sequence[mpf]) -> tuple[list[mpf], list[mpf]]:
    n: int = len(eps) - 1
    q: tuple[int, ...] = kneading.Q
    s: list[mpf] = [tail[q[j]] / eps[j] for j in range(n + 1)]
    kappa: list[mpf] = [1 / (2 * eps[0]), s[1]]

    for j in range(2, n + 1):
        if (p := q[j - 1]) == 0:
            kappa.append(s[j] / kappa[0] * kappa[j - 1] / s[j - 1])
        else:
            kappa.append(s[j] * kappa[j - 1] / (s[j - 1] * s[p] * s[q[p] + 1]))

    return s, kappa


def build(
    kneading: KneadingData,
    eps: Sequence[float | mpf],
    *,
    remainder: float | mpf | None = None,
    tolerance: float = 1e-12,
    precision_bits: int = 113,
    family: TFamily = "custom",
    lam: float | None = None,
) -> PLMap:
    """
    Build the piecewise-linear map with the given interval lengths.

    The lengths epsilon_0..epsilon_N fix the precritical points z_j and, through the kneading map, the slopes s_j of
    the induced map and kappa_j of f.

    :param kneading: The kneading data, to depth at least N.
    :param eps: The interval lengths epsilon_j for j = 0..N.
    :param remainder: Optional. The sum of the lengths beyond N. Defaults to 1/2 minus the sum of ``eps``.
    :param tolerance: Accepted discrepancy between the total length and 1/2, defaults to 1e-12.
    :param precision_bits: Working precision, defaults to 113.
    :param family: The name of the family of the map, defaults to "custom".
    :param lam: The family parameter, if any.
    :raises ParameterError: If a length is not positive, or the lengths fall short of 1/2 by more than the tolerance.
    :raises NonSummableError: If the lengths sum to more than 1/2 plus the tolerance.
    :raises KneadingIndexError: If the kneading data is shorter than the lengths.
    :raises ConditionFailureError: If the kneading map fails Q(k+1) > Q(Q(Q(k))+1).
    :return: A PLMap object.
    """
    n: int = len(eps) - 1
    if n < 1:
        raise ParameterError("At least two interval lengths are needed")
    if kneading.K < n:
        raise KneadingIndexError(f"Kneading depth {kneading.K} is shorter than the map depth {n}")

    passed, failing = check_condition_121(kneading, n - 1) if n >= 3 else (True, None)
    if not passed:
        raise ConditionFailureError(f"Q(k+1) > Q(Q(Q(k))+1) fails at k={failing}", failing)

    with workprec(precision_bits + GUARD_BITS):
        lengths: list[mpf] = [mpf(e) for e in eps]
        if (bad := next((j for j, e in enumerate(lengths) if e <= 0), None)) is not None:
            raise ParameterError(f"Interval length epsilon_{bad}={eps[bad]} is not positive")

        half: mpf = mpf(1) / 2
        total: mpf = fsum(lengths)
        rest: mpf = half - total if remainder is None else mpf(remainder)

        if rest < 0 and (remainder is not None or -rest > tolerance):
            raise NonSummableError(f"Interval lengths sum to {total + max(rest, 0)}, more than 1/2")
        if total + rest > half + tolerance:
            raise NonSummableError(f"Interval lengths and remainder sum to {total + rest}, more than 1/2")
        if total + rest < half - tolerance:
            raise ParameterError(f"Interval lengths leave a deficit of {half - total - rest} below 1/2")

        rest = max(rest, mpf(0))
        tail: list[mpf] = [rest] * (n + 1)
        for j in range(n, 0, -1):
            tail[j - 1] = tail[j] + lengths[j]

        s, kappa = _slopes(kneading, lengths, tail)

        fvals: list[mpf] = [half]
        for j in range(1, n + 1):
            fvals.append(fvals[j - 1] + kappa[j] * lengths[j])

        logger.debug(f"Built {family} map with depth {n} at {precision_bits} bits")

        return PLMap(
            family=family,
            lam=lam,
            precision_bits=precision_bits,
            kneading=kneading,
            N=n,
            eps=tuple(lengths),
            tail=tuple(tail),
            z=tuple(half - t for t in tail),
            kappa=tuple(kappa),
            s=tuple(s),
            fvals=tuple(fvals),
            sides=kneading_sides(kneading)[: n + 1],
        )


def fibonacci_family(lam: float, depth: int = 200, precision_bits: int = 113) -> PLMap:
    """
    Build the Fibonacci map with interval lengths epsilon_j = (1 - lam) / 2 * lam^j.

    :param lam: The parameter, in (0, 1).
    :param depth: The truncation depth N, defaults to 200.
    :param precision_bits: Working precision, defaults to 113.
    :raises ParameterError: If lam lies outside (0, 1).
    :return: A PLMap object.
    """
    if not 0 < lam < 1:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")

    with workprec(precision_bits + GUARD_BITS):
        x: mpf = mpf(lam)
        eps: list[mpf] = [(1 - x) / 2 * x**j for j in range(depth + 1)]
        return build(
            fibonacci_kneading(depth),
            eps,
            remainder=x ** (depth + 1) / 2,
            precision_bits=precision_bits,
            family="fibonacci",
            lam=lam,
        )


def power_law_family(r: float, alpha: float, depth: int = 400, prefix: int = 2, precision_bits: int = 113) -> PLMap:
    """
    Build a map with kneading map Q(k) = floor(r*k) and lengths epsilon_j = C * (j + 1)^(-alpha).

    The constant C makes the lengths up to N plus the integral estimate C * (N + 3/2)^(1 - alpha) / (alpha - 1) of
    the remaining lengths sum to exactly 1/2; the estimate is kept as the tail beyond N.

    :param r: The kneading ratio, in (0, 1).
    :param alpha: The decay exponent, above 1.
    :param depth: The truncation depth N, defaults to 400.
    :param prefix: The number of leading Fibonacci-type kneading values, defaults to 2.
    :param precision_bits: Working precision, defaults to 113.
    :raises ParameterError: If r or alpha are out of range.
    :return: A PLMap object.
    """
    if alpha <= 1:
        raise ParameterError(f"alpha must be above 1, got {alpha}")

    kneading: KneadingData = floor_r_kneading(r, depth, prefix)

    with workprec(precision_bits + GUARD_BITS):
        a: mpf = mpf(alpha)
        weights: list[mpf] = [mpf(j + 1) ** -a for j in range(depth + 1)]
        estimate: mpf = mpf(depth + 1.5) ** (1 - a) / (a - 1)
        scale: mpf = (mpf(1) / 2) / (fsum(weights) + estimate)
        return build(
            kneading,
            [scale * w for w in weights],
            remainder=scale * estimate,
            precision_bits=precision_bits,
            family="power-law",
        )


def verify_conditions(plmap: PLMap, depth: int, tolerance: float = 1e-12) -> ConditionReport:
    """
    Check the slope conditions of the construction for 2 <= j <= depth.

    For every j, the quantity (s_j / kappa_j) * sum_{i > j} kappa_i * epsilon_i must not exceed epsilon_{Q(j)} and,
    when Q(j) > 0, epsilon_{Q(Q(j))+1} / s_{Q(j)}.

    :param plmap: The map.
    :param depth: The last branch J to check.
    :param tolerance: Relative size of the last kept term below which the tail sums count as converged.
    :raises ParameterError: If the depth is below 2 or not below N.
    :raises TailTooShortError: If the sums over i > j have not converged at the truncation depth.
    :return: A ConditionReport.
    """
    if not 2 <= depth < plmap.N:
        raise ParameterError(f"Depth must lie in [2, {plmap.N - 1}], got {depth}")

    q: tuple[int, ...] = plmap.kneading.Q
    checks: list[ConditionCheck] = []

    with workprec(plmap.precision_bits + GUARD_BITS):
        terms: list[mpf] = [k * e for k, e in zip(plmap.kappa, plmap.eps)]
        suffix: list[mpf] = [mpf(0)] * (plmap.N + 1)
        for j in range(plmap.N - 1, -1, -1):
            suffix[j] = suffix[j + 1] + terms[j + 1]

        if terms[plmap.N] > tolerance * suffix[depth]:
            raise TailTooShortError(f"Sum of kappa_i * epsilon_i beyond j={depth} has not converged at N={plmap.N}")

        for j in range(2, depth + 1):
            lhs: mpf = plmap.s[j] / plmap.kappa[j] * suffix[j]
            bound_short: mpf = plmap.eps[q[j]]
            bound_long: mpf | None = plmap.eps[q[q[j]] + 1] / plmap.s[q[j]] if q[j] > 0 else None
            margin: mpf = min(b / lhs for b in (bound_short, bound_long) if b is not None)
            checks.append(
                ConditionCheck(
                    j=j,
                    lhs=float(lhs),
                    bound_short=float(bound_short),
                    bound_long=None if bound_long is None else float(bound_long),
                    margin=float(margin),
                    passed=margin >= 1,
                )
            )

    failure: int | None = next((c.j for c in checks if not c.passed), None)
    return ConditionReport(checks=tuple(checks), passed=failure is None, first_failure=failure)


def branch_table(plmap: PLMap) -> list[BranchRow]:
    """
    List the data of the branches j = 0..N of a map, with numbers rendered at the precision of the map.

    :param plmap: The map.
    :return: A list of BranchRow objects.
    """
    digits: int = digits_for_bits(plmap.precision_bits)
    return [
        BranchRow(
            j=j,
            S=plmap.kneading.S[j],
            Q=plmap.kneading.Q[j],
            eps=mpf_text(plmap.eps[j], digits),
            z=mpf_text(plmap.z[j], digits),
            kappa=mpf_text(plmap.kappa[j], digits),
            s=mpf_text(plmap.s[j], digits),
            fval=mpf_text(plmap.fvals[j], digits),
        )
        for j in range(plmap.N + 1)
    ]
