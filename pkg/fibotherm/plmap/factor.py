from logging import getLogger
from logging import Logger
from typing import Iterable

from mpmath import floor
from mpmath import log
from mpmath import mpf
from mpmath import workprec

from fibotherm.exceptions import BoundaryPointError
from fibotherm.exceptions import DepthExceededError
from fibotherm.exceptions import OutsideDomainError
from fibotherm.exceptions import ParameterError
from fibotherm.models.plmap import GUARD_BITS
from fibotherm.models.plmap import PLMap

from .evaluation import eval_F_linear

logger: Logger = getLogger(__name__)


def _factor_branch(lam: mpf, y: mpf) -> int:
    n: int = max(int(floor(log(y) / log(lam))) + 1, 1)
    while n > 1 and y > lam ** (n - 1):
        n -= 1
    while y <= lam**n:
        n += 1
    return n


def _check(lam: float, y: float | mpf):
    if not 0 < lam < 1:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")
    if not 0 < y <= 1:
        raise ParameterError(f"Point {y} lies outside (0, 1]")


def eval_T(lam: float, x: float | mpf, precision_bits: int = 53) -> mpf:  # noqa: N802
    """
    Evaluate the factor map T on V_1 = (lam, 1] and V_n = (lam^n, lam^(n-1)].

    T(x) = (x - lam) / (1 - lam) on V_1 and (x - lam^n) / (lam * (1 - lam)) on V_n for n >= 2. T maps V_1 onto (0, 1]
    and V_n onto (0, lam^(n-2)].

    :param lam: The parameter, in (0, 1).
    :param x: A point in (0, 1].
    :param precision_bits: Working precision, defaults to 53.
    :raises ParameterError: If lam lies outside (0, 1) or x lies outside (0, 1].
    :return: The value T(x).
    """
    _check(lam, x)
    with workprec(precision_bits):
        a, y = mpf(lam), mpf(x)
        if (n := _factor_branch(a, y)) == 1:
            return (y - a) / (1 - a)
        return (y - a**n) / (a * (1 - a))


def eval_T_reflected(lam: float, y: float | mpf, precision_bits: int = 53) -> mpf:  # noqa: N802
    """
    Evaluate T composed with the reflection y -> lam^n + lam^(n-1) - y of each V_n.

    This is the factor of the induced map under project_to_factor: (1 - y) / (1 - lam) on V_1 and
    (lam^(n-1) - y) / (lam * (1 - lam)) on V_n for n >= 2.

    :param lam: The parameter, in (0, 1).
    :param y: A point in (0, 1].
    :param precision_bits: Working precision, defaults to 53.
    :raises ParameterError: If lam lies outside (0, 1) or y lies outside (0, 1].
    :return: The value of the reflected factor map.
    """
    _check(lam, y)
    with workprec(precision_bits):
        a, y = mpf(lam), mpf(y)
        if (n := _factor_branch(a, y)) == 1:
            return (1 - y) / (1 - a)
        return (a ** (n - 1) - y) / (a * (1 - a))


def project_to_factor(plmap: PLMap, x: float | mpf) -> mpf:
    """
    Project a point of (z_0, 1 - z_0) to (0, 1] by x -> |2x - 1| / (1 - 2 z_0).

    The preimage of V_j is W_j together with its mirror image.

    :param plmap: The map.
    :param x: A point.
    :return: The projected point.
    """
    with workprec(plmap.precision_bits + GUARD_BITS):
        return abs(plmap.c - mpf(x)) / plmap.tail[0]


def semiconjugacy_defect(plmap: PLMap, lam: float | None, sample: Iterable[float | mpf]) -> float:
    """
    Measure how far the projection is from conjugating the induced map to the reflected factor map.

    Points outside the domain, on precritical points, or beyond the depth of the map are skipped.

    :param plmap: The map.
    :param lam: The parameter of the factor map, defaults to the parameter of the map.
    :param sample: The points to test.
    :raises ParameterError: If no parameter is given and the map has none.
    :return: The largest defect |pi(F(x)) - T(pi(x))| over the sample.
    """
    if (lam := lam if lam is not None else plmap.lam) is None:
        raise ParameterError("The factor map needs a parameter")

    defect: mpf = mpf(0)
    skipped: int = 0
    bits: int = plmap.precision_bits + GUARD_BITS

    for x in sample:
        try:
            value, _ = eval_F_linear(plmap, x)
        except (OutsideDomainError, BoundaryPointError, DepthExceededError):
            skipped += 1
            continue
        image: mpf = project_to_factor(plmap, value)
        factor: mpf = eval_T_reflected(lam, project_to_factor(plmap, x), bits)
        with workprec(bits):
            defect = max(defect, abs(image - factor))

    if skipped:
        logger.debug(f"Skipped {skipped} points off the domain of the induced map")

    return float(defect)
