from decimal import Decimal
from logging import getLogger
from logging import Logger
from math import atan2
from math import ceil
from math import floor
from math import log
from math import pi
from math import sqrt
from sys import float_info

from mpmath import acos
from mpmath import cos
from mpmath import exp
from mpmath import expm1
from mpmath import log as mp_log
from mpmath import mpf
from mpmath import sin
from mpmath import workprec
from mpmath import sqrt as mp_sqrt

from fibotherm.exceptions import DivisionNearZeroError
from fibotherm.exceptions import NoConvergenceError
from fibotherm.exceptions import ParameterError
from fibotherm.exceptions import PrecisionExhaustedError
from fibotherm.kneading import fibonacci_kneading
from fibotherm.models.base import mpf_text
from fibotherm.models.kneading import KneadingData
from fibotherm.models.plmap import digits_for_bits
from fibotherm.models.plmap import GUARD_BITS
from fibotherm.models.thermo import ConformalSolution
from fibotherm.models.thermo import TRootCase
from fibotherm.models.thermo import TWeightStatus
from fibotherm.models.thermo import UkReport

from .constants import check_parameters
from .constants import t1

logger: Logger = getLogger(__name__)

DEGENERATE_TOLERANCE: float = 1e-12


def to_decimal(value: mpf | float | int, precision_bits: int = 113) -> Decimal:
    """
    Convert a number to a Decimal carrying all the digits of the working precision.

    :param value: The number.
    :param precision_bits: The working precision, defaults to 113.
    :return: The Decimal.
    """
    return Decimal(mpf_text(mpf(value), digits_for_bits(precision_bits)))


def root_case(lam: float, t: float) -> TRootCase:
    """
    Get the type of the roots r of r^2 = r - e^beta, which drive the weights at p = 0.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature.
    :return: "real", "degenerate", or "complex".
    """
    check_parameters(lam, t)
    discriminant: float = 1 - 4 * (lam * (1 - lam)) ** t
    if abs(discriminant) < DEGENERATE_TOLERANCE:
        return "degenerate"
    return "real" if discriminant > 0 else "complex"


def _weights(
    kneading: KneadingData,
    lam: mpf,
    t: mpf,
    p: mpf,
    n_min: int,
    precision_bits: int,
    tolerance: float,
) -> tuple[list[mpf], TWeightStatus, int | None, mpf]:
    q: tuple[int, ...] = kneading.Q
    max_depth: int = kneading.K
    e_beta: mpf = (lam * (1 - lam)) ** t
    negligible: mpf = mpf(2) ** -precision_bits

    # decay[k] = exp(-p * S_k), using S_k = S_{k-1} + S_{Q(k)}
    decay: list[mpf] = [exp(-p), exp(-2 * p)]
    weights: list[mpf] = [(1 - lam) ** t * decay[0], e_beta * decay[1]]
    partial: mpf = weights[0] + weights[1]
    status: TWeightStatus | None = None
    k0: int | None = None
    deficit: mpf = 1 - partial
    settle_at: int | None = None

    if weights[0] < 0:
        status, k0 = "WentNegative", 1

    k: int = 2
    while status is None or k < n_min:
        if k >= max_depth:
            raise NoConvergenceError(f"Weights undecided at depth {max_depth} for p={mpf_text(p, 20)}")
        decay.append(decay[k - 1] * decay[q[k]])
        weight: mpf = decay[q[k]] * weights[k - 1] - e_beta * decay[k] * weights[k - 2]
        weights.append(weight)
        k += 1
        partial += weight

        if status is not None:
            continue
        if weight < 0:
            status, k0, deficit = "WentNegative", k, 1 - partial
        elif p > 0:
            if settle_at is None:
                # 1 - exp(-p S) cancels to zero in 1 - decay[k - 2] once p S drops below the resolution
                gap: mpf = -expm1(-p * kneading.S[k - 2])
                if gap <= 0:
                    raise PrecisionExhaustedError(f"1 - exp(-p S_{k - 2}) vanished for p={mpf_text(p, 20)}")
                remaining: mpf = (1 - partial + weights[k - 2] + weight) * e_beta * decay[k - 1] / gap
                if remaining < negligible:
                    settle_at = k + 2
            elif k >= settle_at and (deficit := 1 - partial) >= 0:
                status = "SumBelowOne" if deficit >= tolerance else "AllPositiveSumOne"
        elif 0 <= (deficit := 1 - partial) and (deficit < negligible or (k >= max_depth and deficit < tolerance)):
            status = "AllPositiveSumOne"

    return weights, status, k0, deficit


def conformal_weights(
    lam: float,
    t: float,
    p: float | mpf | Decimal,
    n: int = 20,
    *,
    precision_bits: int = 113,
    tolerance: float = 1e-12,
    max_depth: int = 4000,
) -> ConformalSolution:
    """
    Compute the conformal masses w_k of the branch pairs of the induced Fibonacci map for the potential shift p.

    The weights start from w_1 = (1 - lam)^t e^(-p) and w_2 = e^beta e^(-2p) and follow the difference recursion
    w_{k+1} = e^(-p S_{Q(k)}) w_k - e^beta e^(-p S_k) w_{k-1}, which is equivalent to
    w_j = e^beta e^(-p S_{j-1}) (1 - sum_{k < j - 1} w_k).

    For p > 0 the weights decay super-exponentially and the recursion stops once the bound on the remaining mass is
    below the working resolution. For p = 0 it stops when a weight goes negative or the deficit 1 - H vanishes.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param p: The potential shift, p >= 0.
    :param n: The minimum number of weights to compute, defaults to 20.
    :param precision_bits: Working precision, defaults to 113.
    :param tolerance: The largest deficit accepted as a total mass of one, defaults to 1e-12.
    :param max_depth: The largest index of the recursion, defaults to 4000.
    :raises ParameterError: If lam, t, or p are out of range.
    :raises PrecisionExhaustedError: If p underflows a double at 53 bits.
    :raises NoConvergenceError: If the status is undecided at the largest index.
    :return: A ConformalSolution object.
    """
    check_parameters(lam, t)
    if p < 0:
        raise ParameterError(f"p must be non-negative, got {p}")
    if n < 1:
        raise ParameterError(f"At least one weight is required, got {n}")
    if precision_bits <= 53 and 0 < p < float_info.min:
        raise PrecisionExhaustedError(f"p={p} underflows the resolution of {precision_bits} bits")

    with workprec(precision_bits + GUARD_BITS):
        p_value: mpf = mpf(str(p)) if isinstance(p, Decimal) else mpf(p)
        weights, status, k0, deficit = _weights(
            fibonacci_kneading(max(max_depth, n + 1)),
            mpf(lam),
            mpf(t),
            p_value,
            n,
            precision_bits,
            tolerance,
        )
        partial_sums: list[mpf] = []
        total: mpf = mpf(0)
        for weight in weights:
            total += weight
            partial_sums.append(total)

    logger.debug(f"Weights at lambda={lam}, t={t}, p={mpf_text(p_value, 20)}: {status} after {len(weights)} terms")

    return ConformalSolution(
        lam=lam,
        t=t,
        p=to_decimal(p_value, precision_bits),
        precision_bits=precision_bits,
        weights=tuple(weights),
        partial_sums=tuple(partial_sums),
        status=status,
        k0=k0,
        deficit=deficit,
    )


def closed_form_weights_p0(lam: float, t: float, n: int, precision_bits: int = 113) -> tuple[mpf, ...]:
    """
    Evaluate the closed-form solution of the weight recursion w_{k+1} = w_k - e^beta w_{k-1} at p = 0.

    With a = (1 - lam)^t and roots r = (1 +- sqrt(1 - 4 e^beta)) / 2 the weights are
    A r+^(k-1) + B r-^(k-1) for distinct real roots, (a + (1/2 - a)(k - 1)) 2^(1-k) for the double root 1/2, and
    rho^(k-1) (a cos((k-1) theta) + D sin((k-1) theta)) for complex roots rho e^(+-i theta).

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param n: The number of weights.
    :param precision_bits: Working precision, defaults to 113.
    :raises ParameterError: If lam or t are out of range.
    :return: The weights w_1..w_n.
    """
    case: TRootCase = root_case(lam, t)

    with workprec(precision_bits + GUARD_BITS):
        x: mpf = mpf(lam)
        a: mpf = (1 - x) ** t
        e_beta: mpf = (x * (1 - x)) ** t
        half: mpf = mpf(1) / 2

        if case == "real":
            root: mpf = mp_sqrt(1 - 4 * e_beta)
            r_plus, r_minus = (1 + root) / 2, (1 - root) / 2
            c_plus: mpf = r_minus * (r_plus - a) / (r_plus - r_minus)
            c_minus: mpf = r_plus * (a - r_minus) / (r_plus - r_minus)
            return tuple(c_plus * r_plus**k + c_minus * r_minus**k for k in range(n))
        if case == "degenerate":
            return tuple((a + (half - a) * k) * half**k for k in range(n))

        rho: mpf = mp_sqrt(e_beta)
        cos_theta: mpf = 1 / (2 * rho)
        sin_theta: mpf = mp_sqrt(1 - cos_theta**2)
        theta: mpf = acos(cos_theta)
        d: mpf = (rho - a * cos_theta) / sin_theta
        return tuple(rho**k * (a * cos(k * theta) + d * sin(k * theta)) for k in range(n))


def first_negative(weights: tuple[mpf, ...]) -> int | None:
    """
    Get the first index k with w_k < 0.

    :param weights: The weights w_1, w_2, ...
    :return: The 1-based index, or None if every weight is non-negative.
    """
    return next((k for k, w in enumerate(weights, 1) if w < 0), None)


def k0_estimate(lam: float, t: float) -> int:
    """
    Estimate the first index at which the weights at p = 0 go negative, for t < t1.

    The real root case uses ceil(log((r+ - lam^t) / (r- - lam^t)) / log(r+ / r-)) + 2 and the double root case
    ceil(2(1 - lam^t) / (1 - 2 lam^t)) + 1; both are within one of the exact index. The complex case uses the phase of
    the trigonometric solution and is exact.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, 0 < t < t1.
    :raises ParameterError: If lam or t are out of range.
    :return: The estimated index.
    """
    check_parameters(lam, t)
    if t >= t1(lam):
        raise ParameterError(f"The weights at p = 0 stay positive for t={t} >= t1={t1(lam)}")

    lam_t: float = lam**t
    a: float = (1 - lam) ** t
    e_beta: float = lam_t * a

    match root_case(lam, t):
        case "real":
            root: float = sqrt(1 - 4 * e_beta)
            r_plus, r_minus = (1 + root) / 2, (1 - root) / 2
            return ceil(log((r_plus - lam_t) / (r_minus - lam_t)) / log(r_plus / r_minus)) + 2
        case "degenerate":
            return ceil(2 * (1 - lam_t) / (1 - 2 * lam_t)) + 1
        case _:
            rho: float = sqrt(e_beta)
            cos_theta: float = 1 / (2 * rho)
            sin_theta: float = sqrt(1 - cos_theta**2)
            theta: float = atan2(sin_theta, cos_theta)
            phase: float = atan2(a, (rho - a * cos_theta) / sin_theta)
            return floor((pi - phase) / theta) + 2


def k0_asymptotic(lam: float, t: float) -> float:
    """
    Get the leading-order size of the first negative index: 2(1 - lam^t) / (1 - 2 lam^t) when the roots are real and
    2 pi / sqrt(beta') when they are complex.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :raises ParameterError: If lam or t are out of range, or lam^t >= 1/2 with real roots.
    :return: The asymptotic value.
    """
    if root_case(lam, t) == "complex":
        return 2 * pi / sqrt(t * log(lam * (1 - lam)) + log(4))
    if lam**t >= 0.5:
        raise ParameterError(f"lambda^t={lam**t} is not below 1/2")
    return 2 * (1 - lam**t) / (1 - 2 * lam**t)


def decay_profile(solution: ConformalSolution) -> tuple[float, ...]:
    """
    Get alpha_k = log w_k + p S_{k+1} - beta k, which converges when p > 0 as the weights decay super-exponentially.

    :param solution: The conformal weights.
    :return: alpha_k for the leading positive weights.
    """
    kneading: KneadingData = fibonacci_kneading(len(solution.weights) + 2)
    with workprec(solution.precision_bits + GUARD_BITS):
        p: mpf = mpf(str(solution.p))
        beta: mpf = solution.t * mp_log(mpf(solution.lam) * (1 - mpf(solution.lam)))
        profile: list[float] = []
        for k, weight in enumerate(solution.weights, 1):
            if weight <= 0:
                break
            profile.append(float(mp_log(weight) + p * kneading.S[k + 1] - beta * k))
    return tuple(profile)


def uk_recursion(lam: float, t: float, p: float, k_max: int, precision_bits: int = 113) -> UkReport:
    """
    Run the ratio recursion u_1 = lam^t, u_{k+1} = 1 - e^(beta' - p S_{k-2}) / (4 u_k), with S_{-1} = 1.

    The recursion stops at the first u_k <= 0.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param p: The potential shift, p >= 0.
    :param k_max: The number of terms.
    :param precision_bits: Working precision, defaults to 113.
    :raises ParameterError: If an argument is out of range.
    :raises DivisionNearZeroError: If some |u_k| falls below 1e-300.
    :return: A UkReport object.
    """
    check_parameters(lam, t)
    if k_max < 1:
        raise ParameterError(f"At least one term is required, got {k_max}")

    kneading: KneadingData = fibonacci_kneading(max(k_max, 2))
    values: list[float] = []
    first_nonpositive: int | None = None

    with workprec(precision_bits + GUARD_BITS):
        x: mpf = mpf(lam)
        e_beta: mpf = (x * (1 - x)) ** t
        u: mpf = x**t
        for k in range(1, k_max + 1):
            values.append(float(u))
            if u <= 0:
                first_nonpositive = k
                break
            if k == k_max:
                break
            if abs(u) < mpf("1e-300"):
                raise DivisionNearZeroError(f"u_{k}={mpf_text(u, 10)} is too close to zero")
            u = 1 - e_beta * exp(-mpf(p) * kneading.cutting_time(k - 2)) / u

    return UkReport(
        lam=lam,
        t=t,
        p=float(p),
        values=tuple(values),
        min_u=min(values),
        first_nonpositive=first_nonpositive,
        converges_to_one=first_nonpositive is None and abs(values[-1] - 1) < 1e-6,
    )
