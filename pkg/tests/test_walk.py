import numpy as np
import pytest

from fibotherm.exceptions import KneadingIndexError
from fibotherm.exceptions import NoConvergenceError
from fibotherm.exceptions import ParameterError
from fibotherm.kneading import fibonacci_kneading
from fibotherm.models.plmap import PLMap
from fibotherm.thermo import LAMBDA_STAR
from fibotherm.walk import build_walk_model
from fibotherm.walk import classify
from fibotherm.walk import classify_grid
from fibotherm.walk import closed_form_stationary
from fibotherm.walk import conditional_second_moment
from fibotherm.walk import drift
from fibotherm.walk import log_drift
from fibotherm.walk import row_moments
from fibotherm.walk import second_moment
from fibotherm.walk import stationary_vector
from fibotherm.walk import tail_expectation
from fibotherm.walk import tail_ratio
from fibotherm.walk import transition_matrix
from fibotherm.walk import transition_rows


def test_transition_rows():
    matrix, deficit = transition_rows(0.3, None, 200)
    assert matrix.shape == (200, 200)
    assert np.allclose(matrix.sum(axis=1), 1)
    assert matrix[0, 0] == pytest.approx(0.7)
    assert matrix[9, 7] == 0
    assert matrix[9, 8] == pytest.approx(0.7)
    assert deficit[199] == pytest.approx(0.09)
    assert deficit[0] < 1e-100

    with pytest.raises(ParameterError):
        transition_rows(0.3, None, 5)

    with pytest.raises(ParameterError):
        transition_rows(None, None, 50)

    with pytest.raises(KneadingIndexError):
        transition_rows(0.3, fibonacci_kneading(20), 50)


def test_transition_rows_deficit_warning(caplog: pytest.LogCaptureFixture):
    with caplog.at_level("WARNING", logger="fibotherm.walk.matrix"):
        _, deficit = transition_rows(0.3, None, 50)
    assert int((deficit >= 1e-12).sum()) == 21
    assert deficit[28] < 1e-12 <= deficit[29]
    assert "21 of 50 rows" in caplog.text
    assert "from state 30" in caplog.text


def test_transition_matrix_from_map(map_03: PLMap):
    assert np.allclose(transition_matrix(None, depth=50, plmap=map_03), transition_matrix(0.3, depth=50), atol=1e-14)


@pytest.mark.parametrize("lam", [0.3, 0.5, 0.6])
def test_row_moments(lam: float):
    matrix = transition_matrix(lam, depth=200)
    mean, square = row_moments(matrix, 10)
    assert mean == pytest.approx(drift(lam), abs=1e-9)
    assert square == pytest.approx(conditional_second_moment(lam), rel=1e-9)

    with pytest.raises(ParameterError):
        row_moments(matrix, 0)


def test_stationary_vector():
    for lam in (0.2, 0.3, 0.4):
        v = stationary_vector(transition_matrix(lam, depth=200))
        assert np.abs(v - closed_form_stationary(lam, 200)).max() < 1e-10
        assert v.sum() == pytest.approx(1)

    with pytest.raises(NoConvergenceError):
        stationary_vector(transition_matrix(0.3, depth=50), max_iterations=1)

    with pytest.raises(ParameterError):
        closed_form_stationary(0.5, 10)


def test_walk_statistics():
    assert drift(0.5) == 0
    assert drift(0.3) < 0 < drift(0.6)
    assert conditional_second_moment(0.5) == pytest.approx(2)
    assert second_moment(0.6) == pytest.approx(0.25)
    assert second_moment(0.5) == pytest.approx(0)
    assert second_moment(0.3) == pytest.approx(drift(0.3) ** 2)
    assert tail_ratio(LAMBDA_STAR) == pytest.approx(1)

    mean, square = log_drift(0.5, 2.0)
    assert mean == pytest.approx(1 + np.log(0.5))
    assert square > mean**2

    with pytest.raises(ParameterError):
        drift(1)

    with pytest.raises(ParameterError):
        log_drift(0.5, 1)


def test_classify():
    assert classify(0.3) == "Acip"
    assert classify(LAMBDA_STAR) == "SigmaFiniteInfinite"
    assert classify(0.45) == "SigmaFiniteInfinite"
    assert classify(0.5) == "SigmaFiniteInfinite"
    assert classify(0.6) == "WildAttractor"

    rows = classify_grid([0.3, 0.6])
    assert [r.regime for r in rows] == ["Acip", "WildAttractor"]
    assert rows[0].row()["lambda"] == 0.3


def test_tail_expectation(fibonacci_40):
    finite = tail_expectation(0.3, fibonacci_40.S, closed_form_stationary(0.3, 40), 40)
    assert finite.finite
    assert finite.partial_sums[-1] - finite.partial_sums[-2] < 1e-6

    infinite = tail_expectation(0.45, fibonacci_40.S, closed_form_stationary(0.45, 40), 40)
    assert not infinite.finite
    assert infinite.partial_sums[-1] - infinite.partial_sums[-2] > infinite.partial_sums[1] - infinite.partial_sums[0]

    with pytest.raises(ParameterError):
        tail_expectation(0.3, fibonacci_40.S, closed_form_stationary(0.3, 10), 40)


def test_build_walk_model():
    acip = build_walk_model(0.3, depth=100)
    assert acip.regime == "Acip"
    assert acip.v is not None
    assert not acip.null_recurrent

    boundary = build_walk_model(0.5, depth=100)
    assert boundary.null_recurrent
    assert boundary.v is None

    wild = build_walk_model(0.6, depth=100)
    assert wild.regime == "WildAttractor"
    assert wild.v is None
    assert len(wild.model_dump()["A"]) == 100
