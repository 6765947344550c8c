from decimal import Decimal
from math import isfinite

import pytest
from mpmath import mpf

from fibotherm.exceptions import ParameterError
from fibotherm.exceptions import PrecisionExhaustedError
from fibotherm.thermo import closed_form_weights_p0
from fibotherm.thermo import conformal_weights
from fibotherm.thermo import decay_profile
from fibotherm.thermo import first_negative
from fibotherm.thermo import k0_asymptotic
from fibotherm.thermo import k0_estimate
from fibotherm.thermo import root_case
from fibotherm.thermo import t2
from fibotherm.thermo import to_decimal
from fibotherm.thermo import uk_recursion


def test_root_case():
    assert root_case(0.3, 1.0) == "real"
    assert root_case(0.5, 1.0) == "degenerate"
    assert root_case(0.3, t2(0.3)) == "degenerate"
    assert root_case(0.3, 0.5) == "complex"

    with pytest.raises(ParameterError):
        root_case(0.3, 0)


def test_weights_lebesgue():
    solution = conformal_weights(0.5, 1.0, 0)
    assert solution.status == "AllPositiveSumOne"
    assert solution.k0 is None
    assert solution.p == 0
    assert all(float(w) == pytest.approx(0.5**k, rel=1e-20) for k, w in enumerate(solution.weights[:30], 1))
    assert float(solution.deficit) < 1e-30
    assert float(solution.total) == pytest.approx(1)


@pytest.mark.parametrize("lam,t", [(0.2, 0.8), (0.5, 1.0), (0.3, 0.5), (0.7, 0.6)])
def test_closed_form_weights(lam: float, t: float):
    recursion = conformal_weights(lam, t, 0, 20).weights[:20]
    closed = closed_form_weights_p0(lam, t, 20)
    assert len(closed) == 20
    assert max(abs(float(a - b)) for a, b in zip(recursion, closed)) < 1e-20


@pytest.mark.parametrize("lam,t", [(0.2, 0.8), (0.3, 0.5), (0.45, 0.9), (0.7, 0.6)])
def test_first_negative(lam: float, t: float):
    solution = conformal_weights(lam, t, 0, 20)
    assert solution.status == "WentNegative"
    assert solution.k0 == first_negative(closed_form_weights_p0(lam, t, 64))
    assert abs(k0_estimate(lam, t) - solution.k0) <= 2


def test_k0_estimate_degenerate():
    t: float = t2(0.3)
    exact: int | None = first_negative(closed_form_weights_p0(0.3, t, 64))
    assert exact is not None
    assert abs(k0_estimate(0.3, t) - exact) <= 2


def test_k0_bounds():
    assert first_negative((mpf(1), mpf(0), mpf(2))) is None
    assert first_negative((mpf(1), mpf(-1))) == 2
    assert k0_asymptotic(0.3, 0.5) > 0
    assert k0_asymptotic(0.2, 0.8) == pytest.approx(2 * (1 - 0.2**0.8) / (1 - 2 * 0.2**0.8))

    with pytest.raises(ParameterError):
        k0_estimate(0.5, 1.0)

    with pytest.raises(ParameterError):
        k0_asymptotic(0.8, 1.0)


def test_weights_positive_shift():
    solution = conformal_weights(0.3, 0.8, 0.5)
    assert solution.status == "SumBelowOne"
    assert all(w > 0 for w in solution.weights)
    assert float(solution.deficit) > 1e-12
    assert solution.p == Decimal("0.5")

    profile = decay_profile(solution)
    assert len(profile) == len(solution.weights)
    assert all(isfinite(a) for a in profile)


def test_weights_errors():
    with pytest.raises(ParameterError):
        conformal_weights(0.3, 0.8, -1)

    with pytest.raises(ParameterError):
        conformal_weights(0.3, 0.8, 0, 0)

    with pytest.raises(PrecisionExhaustedError):
        conformal_weights(0.3, 0.8, 1e-320, precision_bits=53)


def test_weights_shift_below_resolution():
    # p * S_k stays below 2^-113 for the leading indices
    solution = conformal_weights(0.7, t2(0.7) - 1e-2, mpf("1e-60"))
    assert solution.status in ("WentNegative", "SumBelowOne", "AllPositiveSumOne")
    assert all(isfinite(float(w)) for w in solution.weights)


def test_to_decimal():
    third: Decimal = to_decimal(mpf(1) / 3)
    assert third > Decimal("0.3333333333333333")
    assert len(str(third)) > 30
    assert to_decimal(0) == 0


def test_uk_recursion():
    stable = uk_recursion(0.3, 1.0, 0, 50)
    assert stable.first_nonpositive is None
    assert stable.min_u == pytest.approx(0.3)
    assert not stable.converges_to_one

    negative = uk_recursion(0.3, 0.5, 0, 50)
    assert negative.first_nonpositive == 3
    assert negative.min_u <= 0

    shifted = uk_recursion(0.3, 0.8, 1.0, 30)
    assert shifted.converges_to_one

    with pytest.raises(ParameterError):
        uk_recursion(0.3, 0.8, 0, 0)
