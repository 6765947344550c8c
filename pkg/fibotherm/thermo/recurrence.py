from decimal import Decimal
from math import exp
from math import isclose
from math import log

import numpy as np
from numpy.typing import NDArray

from fibotherm.exceptions import CombinatorialOverflowError
from fibotherm.exceptions import ParameterError
from fibotherm.kneading import fibonacci_kneading
from fibotherm.models.kneading import KneadingData
from fibotherm.models.thermo import GurevichReport
from fibotherm.models.thermo import RecurrenceReport
from fibotherm.models.thermo import TRecurrence

from .constants import check_parameters
from .constants import LAMBDA_STAR
from .constants import t1
from .pressure import solve_pressure

GUREVICH_MAX_LENGTH: int = 20
GUREVICH_BUDGET: int = 4_000_000


def _recurrence_types(lam: float, t: float, threshold: float) -> tuple[TRecurrence, TRecurrence]:
    at_threshold: bool = isclose(t, threshold, rel_tol=0, abs_tol=1e-12)
    below: bool = t < threshold and not at_threshold

    if lam > 0.5:
        return ("PositiveRecurrent",) * 2 if below else ("Transient",) * 2

    induced: TRecurrence
    original: TRecurrence
    if below:
        induced = original = "PositiveRecurrent"
    elif at_threshold:
        induced = "NullRecurrent" if lam == 0.5 else "PositiveRecurrent"
        original = "PositiveRecurrent" if lam < LAMBDA_STAR else "NullRecurrent"
    else:
        induced = original = "Transient"
    return induced, original


def classify_recurrence(
    lam: float,
    t: float,
    p: float | Decimal | None = None,
    *,
    precision_bits: int = 113,
    relative_tolerance: float = 1e-9,
) -> RecurrenceReport:
    """
    Classify the geometric potential shifted by p on the induced and the original Fibonacci map as positive recurrent,
    null recurrent, or transient.

    Only the shift by the pressure can be recurrent, so a p that differs from the solved pressure by more than the
    relative tolerance makes both systems transient. Without p, the classification is at the pressure.

    For lam > 1/2 both systems are positive recurrent for t < t1 and transient otherwise. For lam <= 1/2 both are
    positive recurrent for t < 1 and transient for t > 1; at t = 1 the induced system is null recurrent only for
    lam = 1/2, and the original system is positive recurrent only for lam < 2/(3+sqrt(5)).

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param p: Optional. The shift of the potential.
    :param precision_bits: Working precision of the pressure solver, defaults to 113.
    :param relative_tolerance: The largest relative difference from the pressure, defaults to 1e-9.
    :raises ParameterError: If lam lies outside (0, 1) or t <= 0.
    :return: A RecurrenceReport object.
    """
    check_parameters(lam, t)
    threshold: float = t1(lam)
    induced, original = _recurrence_types(lam, t, threshold)

    if p is not None:
        shift: Decimal = p if isinstance(p, Decimal) else Decimal(str(p))
        solved: Decimal = solve_pressure(lam, t, precision_bits=precision_bits).p
        if abs(shift - solved) > Decimal(str(relative_tolerance)) * solved or (solved == 0 and shift != 0):
            induced = original = "Transient"
        p = shift

    return RecurrenceReport(lam=lam, t=t, t1=threshold, p=p, induced=induced, original=original)


def gurevich_diagnostic(
    lam: float,
    t: float,
    p: float | Decimal | None = None,
    n_max: int = 15,
    depth: int = 60,
    *,
    precision_bits: int = 113,
) -> GurevichReport:
    """
    Compute the local partition sums Z_n at the first state of the induced Fibonacci map truncated to ``depth``
    states.

    Z_n is the sum over the loops of length n through the first state of the products of the weights
    s_i^(-t) e^(-p S_{i-1}) of the visited states, where state i may be followed by any state j > Q(i). The sums are
    computed as (M^n)_{11} by repeated vector products, rescaled at each step. At the pressure of a recurrent
    potential the ratios log Z_n - log Z_{n-1} tend to zero while the rates (1/n) log Z_n only do so like 1/n.

    :param lam: The parameter, in (0, 1).
    :param t: The inverse temperature, t > 0.
    :param p: Optional. The shift of the potential, defaults to the solved pressure.
    :param n_max: The longest loop, at most 20, defaults to 15.
    :param depth: The number of states, defaults to 60.
    :param precision_bits: Working precision of the pressure solver, defaults to 113.
    :raises ParameterError: If an argument is out of range.
    :raises CombinatorialOverflowError: If n_max exceeds 20 or the work exceeds the budget.
    :return: A GurevichReport object.
    """
    check_parameters(lam, t)
    if n_max < 1 or depth < 1:
        raise ParameterError(f"Loop length and depth must be positive, got {n_max} and {depth}")
    if n_max > GUREVICH_MAX_LENGTH or n_max * depth**2 > GUREVICH_BUDGET:
        raise CombinatorialOverflowError(f"Partition sums up to n={n_max} on {depth} states exceed the budget")

    shift: Decimal
    if p is None:
        shift = solve_pressure(lam, t, precision_bits=precision_bits).p
    else:
        shift = p if isinstance(p, Decimal) else Decimal(str(p))

    kneading: KneadingData = fibonacci_kneading(max(depth, 2))
    q: NDArray[np.int64] = np.array(kneading.Q[1 : depth + 1], dtype=np.int64)
    times: NDArray[np.float64] = np.array(kneading.S[:depth], dtype=np.float64)
    log_s: NDArray[np.float64] = np.full(depth, -log(lam * (1 - lam)))
    log_s[0] = -log(1 - lam)
    log_weights: NDArray[np.float64] = -t * log_s - float(shift) * times

    columns: NDArray[np.int64] = np.arange(1, depth + 1)
    matrix: NDArray[np.float64] = np.where(columns[None, :] > q[:, None], np.exp(log_weights)[:, None], 0.0)

    x: NDArray[np.float64] = np.zeros(depth)
    x[0] = 1.0
    log_scale: float = 0.0
    log_sums: list[float] = []

    for _ in range(n_max):
        x = x @ matrix
        if (largest := x.max()) <= 0:
            log_sums.extend([-np.inf] * (n_max - len(log_sums)))
            break
        x /= largest
        log_scale += log(largest)
        log_sums.append(log(x[0]) + log_scale if x[0] > 0 else -np.inf)

    sums: list[float] = [exp(s) if s > -np.inf else 0.0 for s in log_sums]
    ratios: list[float] = [b - a if b > -np.inf else -np.inf for a, b in zip([0.0, *log_sums], log_sums)]

    return GurevichReport(
        lam=lam,
        t=t,
        p=shift,
        N=depth,
        rates=tuple(s / n for n, s in enumerate(log_sums, 1)),
        ratios=tuple(ratios),
        sums=tuple(sums),
        partial_sums=tuple(np.cumsum(sums).tolist()),
    )
