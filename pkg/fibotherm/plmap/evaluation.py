from bisect import bisect_left
from logging import getLogger
from logging import Logger
from math import ceil
from math import log
from math import log2

from mpmath import mpf
from mpmath import workprec

from fibotherm.exceptions import BoundaryPointError
from fibotherm.exceptions import DepthExceededError
from fibotherm.exceptions import KneadingIndexError
from fibotherm.exceptions import OutsideDomainError
from fibotherm.exceptions import ParameterError
from fibotherm.models.base import mpf_text
from fibotherm.models.plmap import BranchInfo
from fibotherm.models.plmap import digits_for_bits
from fibotherm.models.plmap import GUARD_BITS
from fibotherm.models.plmap import PLMap
from fibotherm.models.plmap import PointEvaluation
from fibotherm.models.plmap import TSide
from fibotherm.utils.helpers import ExceptionManager

logger: Logger = getLogger(__name__)


def locate(plmap: PLMap, d: mpf) -> int:
    """
    Find the branch of f containing the points at distance d from c.

    :param plmap: The map.
    :param d: The distance |x - c|.
    :raises DepthExceededError: If d is smaller than the distance of z_N to c.
    :return: The smallest j with c - z_j <= d; 0 stands for W_0 and its mirror image.
    """
    j: int = bisect_left(range(plmap.N + 1), True, key=lambda i: plmap.tail[i] <= d)
    if j > plmap.N:
        raise DepthExceededError(f"Point at distance {float(d):.3e} from c is beyond depth N={plmap.N}")
    return j


def _f(plmap: PLMap, x: mpf) -> mpf:
    d: mpf = abs(plmap.c - x)
    if (j := locate(plmap, d)) == 0:
        return plmap.kappa[0] * (plmap.c - d)
    return plmap.fvals[j - 1] + plmap.kappa[j] * (plmap.tail[j - 1] - d)


def _slope(plmap: PLMap, x: mpf) -> mpf:
    return plmap.kappa[locate(plmap, abs(plmap.c - x))]


def _domain_branch(plmap: PLMap, x: mpf) -> tuple[int, mpf]:
    d: mpf = abs(plmap.c - x)
    if d >= plmap.tail[0]:
        raise OutsideDomainError(f"Point {x} lies outside (z_0, 1 - z_0)")
    j: int = locate(plmap, d)
    if plmap.tail[j] == d:
        raise BoundaryPointError(f"Point {x} is the precritical point of branch {j}")
    return j, d


def eval_f(plmap: PLMap, x: float | mpf) -> mpf:
    """
    Evaluate the map f.

    :param plmap: The map.
    :param x: A point in [0, 1].
    :raises ParameterError: If x lies outside [0, 1].
    :raises DepthExceededError: If x lies closer to c than z_N.
    :return: The value f(x).
    """
    with workprec(plmap.precision_bits + GUARD_BITS):
        if not 0 <= (x := mpf(x)) <= 1:
            raise ParameterError(f"Point {x} lies outside [0, 1]")
        return _f(plmap, x)


def iterate_f(plmap: PLMap, x: float | mpf, n: int) -> mpf:
    """
    Apply f to a point n times.

    :param plmap: The map.
    :param x: A point in [0, 1].
    :param n: The number of iterations.
    :raises DepthExceededError: If some iterate lies closer to c than z_N.
    :return: The value f^n(x).
    """
    with workprec(plmap.precision_bits + GUARD_BITS):
        y: mpf = mpf(x)
        for _ in range(n):
            y = _f(plmap, y)
        return y


def branch_info(plmap: PLMap, j: int) -> BranchInfo:
    """
    Describe branch j of the induced map using the kneading sides.

    The image of W_j lies on the side of c where c_{S_{j-1}} lies.

    :param plmap: The map.
    :param j: The branch index, 1 <= j <= N.
    :raises ParameterError: If j is less than 1.
    :raises DepthExceededError: If j exceeds the depth of the map.
    :return: A BranchInfo object.
    """
    if j < 1:
        raise ParameterError(f"Branch index must be at least 1, got {j}")
    if j > plmap.N:
        raise DepthExceededError(f"Branch {j} is beyond depth N={plmap.N}")

    side: TSide = "Right" if plmap.sides[j - 1] else "Left"
    length: mpf = plmap.tail[plmap.kneading.Q[j]]

    return BranchInfo(
        j=j,
        inducing_time=plmap.kneading.S[j - 1],
        slope=plmap.s[j],
        orientation=1 if side == "Right" else -1,
        image_side=side,
        image=(plmap.c, plmap.c + length) if side == "Right" else (plmap.c - length, plmap.c),
        image_length=plmap.s[j] * plmap.eps[j],
    )


def branch_orientation(plmap: PLMap, j: int, empirical: bool = True) -> BranchInfo:
    """
    Describe branch j and confirm its image side by composing f at the midpoint of W_j.

    :param plmap: The map.
    :param j: The branch index, 1 <= j <= N.
    :param empirical: Whether to compose f to confirm the side, defaults to True.
    :raises DepthExceededError: If an iterate of the midpoint is not resolved.
    :return: A BranchInfo object; if the composed side differs from the kneading side, it takes the composed side
        and is not marked as confirmed.
    """
    info: BranchInfo = branch_info(plmap, j)
    if not empirical:
        return info

    with workprec(plmap.precision_bits + GUARD_BITS):
        midpoint: mpf = plmap.c - (plmap.tail[j - 1] + plmap.tail[j]) / 2
        side: TSide = "Right" if iterate_f(plmap, midpoint, info.inducing_time) > plmap.c else "Left"

    if side == info.image_side:
        return info.model_copy(update={"confirmed": True})

    logger.warning(f"Branch {j} lands {side} of c but the kneading sides give {info.image_side}")
    return info.model_copy(
        update={
            "image_side": side,
            "orientation": 1 if side == "Right" else -1,
            "image": (info.image[1] - info.image_length, info.image[1])
            if side == "Left"
            else (info.image[0], info.image[0] + info.image_length),
        }
    )


def eval_F_linear(plmap: PLMap, x: float | mpf) -> tuple[mpf, BranchInfo]:  # noqa: N802
    """
    Evaluate the induced map F with the affine formula of its branch.

    On W_j the map is c + orientation * s_j * (x - z_{j-1}), and F(1 - x) = F(x).

    :param plmap: The map.
    :param x: A point in (z_0, 1 - z_0).
    :raises OutsideDomainError: If x lies outside (z_0, 1 - z_0).
    :raises BoundaryPointError: If x is a precritical point z_j or 1 - z_j.
    :raises DepthExceededError: If x lies closer to c than z_N.
    :return: A tuple with F(x) and the branch containing x.
    """
    with workprec(plmap.precision_bits + GUARD_BITS):
        j, d = _domain_branch(plmap, mpf(x))
        info: BranchInfo = branch_info(plmap, j)
        return plmap.c + info.orientation * plmap.s[j] * (plmap.tail[j - 1] - d), info


def eval_F_iterate(plmap: PLMap, x: float | mpf) -> mpf:  # noqa: N802
    """
    Evaluate the induced map F by composing f exactly S_{j-1} times on W_j.

    :param plmap: The map.
    :param x: A point in (z_0, 1 - z_0).
    :raises OutsideDomainError: If x lies outside (z_0, 1 - z_0).
    :raises BoundaryPointError: If x is a precritical point z_j or 1 - z_j.
    :raises DepthExceededError: If x or some iterate lies closer to c than z_N.
    :return: The value F(x).
    """
    with workprec(plmap.precision_bits + GUARD_BITS):
        j, _ = _domain_branch(plmap, x := mpf(x))
        return iterate_f(plmap, x, plmap.kneading.S[j - 1])


def evaluate_point(plmap: PLMap, x: float | str) -> PointEvaluation:
    """
    Evaluate f and the induced map F at a point, reporting unresolved values in the status instead of raising.

    :param plmap: The map.
    :param x: A point in [0, 1], as a number or a decimal string.
    :raises ParameterError: If x lies outside [0, 1].
    :return: A PointEvaluation object.
    """
    digits: int = digits_for_bits(plmap.precision_bits)
    with workprec(plmap.precision_bits + GUARD_BITS):
        point: mpf = mpf(x)

    f_value: mpf | None = None
    with ExceptionManager(DepthExceededError) as f_exception:
        f_value = eval_f(plmap, point)

    induced: mpf | None = None
    branch: int | None = None
    with ExceptionManager(DepthExceededError, OutsideDomainError, BoundaryPointError) as induced_exception:
        induced, info = eval_F_linear(plmap, point)
        branch = info.j

    return PointEvaluation(
        x=mpf_text(point, digits),
        f=None if f_value is None else mpf_text(f_value, digits),
        branch=branch,
        F=None if induced is None else mpf_text(induced, digits),
        status=f_exception.status if f_exception.exception else induced_exception.status,
    )


def critical_orbit(plmap: PLMap, n: int) -> tuple[mpf, ...]:
    """
    Compute the first n points c_1, ..., c_n of the orbit of the critical point.

    :param plmap: The map.
    :param n: The number of points.
    :raises DepthExceededError: If some point of the orbit is not resolved.
    :return: A tuple with c_i at index i - 1.
    """
    points: list[mpf] = []
    with workprec(plmap.precision_bits + GUARD_BITS):
        y: mpf = plmap.critical_value
        for _ in range(n):
            points.append(y)
            y = _f(plmap, y)
    return tuple(points)


def critical_derivative_check(plmap: PLMap, k: int) -> mpf:
    """
    Compute |Df^{S_{Q(k+1)}}(c_{S_k})| by chaining the slopes of f along the critical orbit.

    For Fibonacci maps the product is s_{k-1} * s_{k-2}: s_2 * s_1 at k = 3 and [lam * (1 - lam)]^(-2) for k >= 4.

    :param plmap: The map.
    :param k: The index, at least 1.
    :raises ParameterError: If k is less than 1.
    :raises KneadingIndexError: If Q(k+1) is beyond the depth of the kneading map.
    :raises DepthExceededError: If the orbit is not resolved.
    :return: The derivative.
    """
    if k < 1:
        raise ParameterError(f"Index must be at least 1, got {k}")
    if k + 1 > plmap.kneading.K:
        raise KneadingIndexError(f"Q({k + 1}) is beyond depth K={plmap.kneading.K}")

    start: int = plmap.kneading.S[k]
    length: int = plmap.kneading.S[plmap.kneading.Q[k + 1]]
    orbit: tuple[mpf, ...] = critical_orbit(plmap, start + length - 1)

    with workprec(plmap.precision_bits + GUARD_BITS):
        product: mpf = mpf(1)
        for point in orbit[start - 1 :]:
            product *= _slope(plmap, point)
        return product


def required_precision(plmap: PLMap, j: int, digits: int = 12) -> int:
    """
    Estimate the precision eval_F_iterate needs on W_j to keep the given number of correct digits.

    Rounding errors of the first iterate are amplified by the derivative s_j / kappa_j of the remaining S_{j-1} - 1
    iterates.

    :param plmap: The map.
    :param j: The branch index, 1 <= j <= N.
    :param digits: The number of correct decimal digits, defaults to 12.
    :return: The number of bits.
    """
    info: BranchInfo = branch_info(plmap, j)
    with workprec(plmap.precision_bits + GUARD_BITS):
        amplification: float = float(info.slope / plmap.kappa[j])
    return ceil(max(log2(amplification), 0) + digits * log2(10)) + 16


def critical_order(lam: float) -> float:
    """
    Get the critical order 3 + 2 * log(1 - lam) / log(lam) of the Fibonacci map.

    :param lam: The parameter, in (0, 1).
    :raises ParameterError: If lam lies outside (0, 1).
    :return: The critical order.
    """
    if not 0 < lam < 1:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")
    return 3 + 2 * log(1 - lam) / log(lam)
