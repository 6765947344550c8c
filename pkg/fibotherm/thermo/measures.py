from math import exp

from fibotherm.exceptions import InvariantUnavailableError
from fibotherm.exceptions import ParameterError
from fibotherm.models.plmap import PLMap
from fibotherm.models.thermo import MeasuresReport
from fibotherm.models.thermo import TConformalCase
from fibotherm.plmap import branch_info
from fibotherm.plmap import fibonacci_family

from .constants import check_parameters


def conformal_masses(lam: float, t: float, n: int = 200) -> tuple[TConformalCase, tuple[float, ...]]:
    """
    Get the masses of W_1..W_n under the conformal measure of the induced map, which are also the masses of their
    mirror images.

    When lam^t <= 1/2 the mass of W_k is (1 - lam^t) / 2 * lam^(t(k-1)); otherwise it is
    ((k - 1) + lam^(-t) (1 - k/2)) (1/2)^(k+1).

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param n: The number of branches, defaults to 200.
    :raises ParameterError: If an argument is out of range.
    :return: A tuple with the case and the masses.
    """
    check_parameters(lam, t)
    if n < 1:
        raise ParameterError(f"At least one branch is required, got {n}")

    lam_t: float = lam**t
    if lam_t <= 0.5:
        return "geometric", tuple((1 - lam_t) / 2 * lam_t ** (k - 1) for k in range(1, n + 1))
    return "linear", tuple(((k - 1) + (1 - k / 2) / lam_t) * 0.5 ** (k + 1) for k in range(1, n + 1))


def invariant_masses(lam: float, t: float, n: int = 200) -> tuple[float, ...]:
    """
    Get the invariant masses ((1 - 2 lam^t) / lam^t) (lam^t / (1 - lam^t))^j of the branch pairs j = 1..n.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param n: The number of branches, defaults to 200.
    :raises ParameterError: If an argument is out of range.
    :raises InvariantUnavailableError: If lam^t >= 1/2.
    :return: The masses.
    """
    check_parameters(lam, t)
    lam_t: float = lam**t
    if lam_t >= 0.5:
        raise InvariantUnavailableError(f"No invariant probability for lambda^t={lam_t} >= 1/2")
    ratio: float = lam_t / (1 - lam_t)
    return tuple((1 - 2 * lam_t) / lam_t * ratio**j for j in range(1, n + 1))


def left_fraction(plmap: PLMap, masses: tuple[float, ...]) -> float:
    """
    Get the share of the given branch masses carried by branches whose image lies left of c.

    :param plmap: The map, to depth at least the number of masses.
    :param masses: The masses of the branches 1..n.
    :return: The sum of the masses of the branches with image side Left.
    """
    return sum(m for j, m in enumerate(masses, 1) if branch_info(plmap, j).image_side == "Left")


def closed_form_measures(lam: float, t: float, n: int = 200, plmap: PLMap | None = None) -> MeasuresReport:
    """
    Evaluate the closed forms of the conformal and invariant measures of the induced Fibonacci map.

    The invariant mass of a pair of branches splits between W_j and its mirror image as zeta and 1 - zeta, where zeta
    is the invariant mass that the induced map sends left of c. The invariant measure is only reported when
    lam^t < 1/2.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param n: The number of branches, defaults to 200.
    :param plmap: Optional. The Fibonacci map whose branch sides are used, to depth at least n.
    :raises ParameterError: If an argument is out of range.
    :return: A MeasuresReport object.
    """
    case, conformal = conformal_masses(lam, t, n)

    if lam**t >= 0.5:
        return MeasuresReport(lam=lam, t=t, case=case, conformal=conformal, conformal_total=2 * sum(conformal))

    invariant: tuple[float, ...] = invariant_masses(lam, t, n)
    plmap = plmap or fibonacci_family(lam, depth=n, precision_bits=53)
    zeta: float = left_fraction(plmap, invariant)

    return MeasuresReport(
        lam=lam,
        t=t,
        case=case,
        conformal=conformal,
        invariant_left=tuple(zeta * v for v in invariant),
        invariant_right=tuple((1 - zeta) * v for v in invariant),
        zeta=zeta,
        conformal_total=2 * sum(conformal),
        invariant_total=sum(invariant),
    )


def closed_form_normalising_constant(lam: float, t: float, p: float = 0.0) -> float:
    """
    Get the normalising constant M of the projected conformal measure for the geometric masses, lam^t <= 1/2.

    With L = lam^t and a = (1 - lam)^t, the slopes of the Fibonacci map give kappa_0^t = 1/a, kappa_2^t = 1/L,
    kappa_3^t = a/L, kappa_4^t = a^3/L and kappa_j^t = a^5 (L a)^(2(j-5)) for j >= 5, so both series of M are
    geometric from the fifth branch on:

    M = 1 + e^p (1 - L)/2 (1 + L a + L^2 a^3 + L^4 a^5 / (1 - L^3 a^2))
    + e^(2p) (1 - L) L/2 (1 + L a^2 + L^3 a^4 / (1 - L^3 a^2)).

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param p: The shift of the potential, defaults to 0.
    :raises ParameterError: If an argument is out of range or lam^t > 1/2.
    :return: The constant M.
    """
    check_parameters(lam, t)
    lam_t: float = lam**t
    if lam_t > 0.5:
        raise ParameterError(f"The conformal masses are not geometric for lambda^t={lam_t} > 1/2")

    a: float = (1 - lam) ** t
    tail: float = 1 - lam_t**3 * a**2
    first: float = (1 - lam_t) / 2 * (1 + lam_t * a + lam_t**2 * a**3 + lam_t**4 * a**5 / tail)
    second: float = (1 - lam_t) * lam_t / 2 * (1 + lam_t * a**2 + lam_t**3 * a**4 / tail)
    return 1 + exp(p) * first + exp(2 * p) * second
