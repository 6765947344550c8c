from math import exp
from math import log
from math import pi
from math import sqrt

from fibotherm.exceptions import ParameterError
from fibotherm.models.thermo import DimensionReport
from fibotherm.models.thermo import PressureBounds
from fibotherm.models.thermo import ThermoConstants
from fibotherm.plmap import critical_order
from fibotherm.walk import classify
from fibotherm.walk import GOLDEN_MEAN

# Smallest lambda of the second-type transition, 2 / (3 + sqrt(5)).
LAMBDA_STAR: float = 2 / (3 + sqrt(5))


def check_parameters(lam: float, t: float | None = None):
    if not 0 < lam < 1:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")
    if t is not None and t <= 0:
        raise ParameterError(f"t must be positive, got {t}")


def t2(lam: float) -> float:
    """
    Get the parameter t2 = -log(4) / log(lam * (1 - lam)) at which e^beta = 1/4.

    :param lam: The parameter, in (0, 1).
    :raises ParameterError: If lam lies outside (0, 1).
    :return: The value of t2, at most 1.
    """
    check_parameters(lam)
    return -log(4) / log(lam * (1 - lam))


def t1(lam: float) -> float:
    """
    Get the phase transition parameter t1, the smallest t at which the pressure vanishes.

    :param lam: The parameter, in (0, 1).
    :raises ParameterError: If lam lies outside (0, 1).
    :return: 1 if lam <= 1/2, t2 otherwise.
    """
    return 1.0 if lam <= 0.5 else t2(lam)


def thermo_constants(lam: float, t: float) -> ThermoConstants:
    """
    Compute the constants of the geometric potential -t log|f'| of the Fibonacci map.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature.
    :raises ParameterError: If lam lies outside (0, 1).
    :return: A ThermoConstants object.
    """
    check_parameters(lam)
    log_b: float = log(lam * (1 - lam))
    return ThermoConstants(
        lam=lam,
        t=t,
        beta=t * log_b,
        beta_prime=t * log_b + log(4),
        t1=t1(lam),
        t2=t2(lam),
        golden_mean=GOLDEN_MEAN,
        gamma=2 * log(GOLDEN_MEAN) / sqrt(-log_b),
    )


def hyperbolic_dimension(lam: float) -> float:
    """
    Get the supremum of the Hausdorff dimensions of compact invariant sets that avoid the critical point.

    :param lam: The parameter, in (0, 1).
    :raises ParameterError: If lam lies outside (0, 1).
    :return: -log(4) / log(lam * (1 - lam)) if lam <= 1/2, 1 otherwise.
    """
    return t2(lam) if lam <= 0.5 else 1.0


def dimension_report(lam: float) -> DimensionReport:
    check_parameters(lam)
    return DimensionReport(
        lam=lam,
        dimension=hyperbolic_dimension(lam),
        t1=t1(lam),
        t2=t2(lam),
        critical_order=critical_order(lam),
        regime=classify(lam),
    )


def pressure_bounds(lam: float, t: float) -> PressureBounds:
    """
    Get the structural factors of the bounds on the pressure on a left neighbourhood of t1.

    The multiplicative constants of the bounds depend on lam and are not computed; the factors are meant for fitting
    the exponents. For lam >= 1/2 the factors are exp(-pi * gamma / sqrt(t1 - t)) and
    exp(-5/6 * gamma / sqrt(t1 - t)). For 2/(3+sqrt(5)) <= lam < 1/2 they are (1 - t)^(log(golden_mean) / log(R))
    and (1 - t)^(lam * log(golden_mean) / (2t(1 - 2 lam))), as long as t > t2 so that R > 1. Below 2/(3+sqrt(5)), or
    at t <= t2, both factors are t1 - t.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, 0 < t < t1.
    :raises ParameterError: If lam lies outside (0, 1) or t outside (0, t1).
    :return: A PressureBounds object.
    """
    check_parameters(lam, t)
    constants: ThermoConstants = thermo_constants(lam, t)
    log_lower, log_upper, ratio = log_pressure_factors(lam, t)
    return PressureBounds(
        lam=lam,
        t=t,
        lower_factor=exp(log_lower),
        upper_factor=exp(log_upper),
        R=ratio,
        gamma=constants.gamma,
    )


def log_pressure_factors(lam: float, t: float) -> tuple[float, float, float | None]:
    """
    Get the logarithms of the structural factors of the pressure bounds, which underflow a double close to t1.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, 0 < t < t1.
    :raises ParameterError: If lam lies outside (0, 1) or t outside (0, t1).
    :return: A tuple with the logarithm of the lower factor, the logarithm of the upper factor, and R when it applies.
    """
    check_parameters(lam, t)
    constants: ThermoConstants = thermo_constants(lam, t)
    if t >= constants.t1:
        raise ParameterError(f"t must lie below t1={constants.t1}, got {t}")

    gap: float = constants.t1 - t
    log_golden: float = log(GOLDEN_MEAN)

    if lam >= 0.5:
        return -pi * constants.gamma / sqrt(gap), -5 / 6 * constants.gamma / sqrt(gap), None
    e_beta: float = exp(constants.beta)
    if lam >= LAMBDA_STAR and e_beta < 0.25:
        ratio: float = (1 + sqrt(1 - 4 * e_beta)) ** 2 / (4 * e_beta)
        return log(gap) * log_golden / log(ratio), log(gap) * lam * log_golden / (2 * t * (1 - 2 * lam)), ratio
    return log(gap), log(gap), None
