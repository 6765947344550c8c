import numpy as np
import pytest

from fibotherm.exceptions import ParameterError
from fibotherm.models.plmap import PLMap
from fibotherm.simulation import branch_histogram
from fibotherm.simulation import orbit_escape_fraction
from fibotherm.simulation import random_starts
from fibotherm.simulation import simulate_orbit
from fibotherm.simulation import simulate_walk
from fibotherm.simulation import transition_frequency_test
from fibotherm.walk import drift


def test_walk_escape():
    report = simulate_walk(0.6, 2000, 1000, seed=11)
    assert report.escape_fraction >= 0.99
    assert report.tv_distance is None
    assert report.expected_drift == pytest.approx(0.5)
    assert abs(report.drift - 0.5) < 5 * report.drift_stderr + 1e-3


def test_walk_occupation():
    report = simulate_walk(0.3, 5000, 2000, seed=12)
    assert report.escape_fraction < 0.01
    assert report.tv_distance is not None
    assert report.tv_distance < 0.02
    assert len(report.histogram) == 101
    assert sum(report.histogram) == pytest.approx(1)
    assert abs(report.drift - drift(0.3)) < 5 * report.drift_stderr + 1e-3


def test_walk_reproducible():
    first = simulate_walk(0.3, 5000, 200, seed=13)
    assert simulate_walk(0.3, 5000, 200, seed=13) == first
    assert simulate_walk(0.3, 5000, 200, seed=13, threads=2) == first
    assert simulate_walk(0.3, 5000, 200, seed=14) != first
    assert list(first.row()) == list(first.row_fields)


def test_walk_cap():
    report = simulate_walk(0.9, 100, 500, seed=15, cap=100)
    assert report.cap == 100
    assert report.frozen_fraction == 1
    assert report.escape_fraction == 1


def test_walk_errors():
    with pytest.raises(ParameterError):
        simulate_walk(1.0)

    with pytest.raises(ParameterError):
        simulate_walk(0.3, 0)

    with pytest.raises(ParameterError):
        simulate_walk(0.3, 10, 10, threshold=20_000)


def test_random_starts(map_05: PLMap):
    starts = random_starts(map_05, 10, 3)
    assert len(starts) == 10
    assert all(map_05.z[0] < x < 1 - map_05.z[0] for x in starts)
    assert random_starts(map_05, 10, 3) == starts


def test_simulate_orbit(map_03: PLMap):
    start = random_starts(map_03, 1, 4)[0]
    report = simulate_orbit(map_03, start, 50)
    assert report.status == "ok"
    assert report.returns == 50
    assert not report.escaped
    assert all(b >= 1 for b in report.branches)

    outside = simulate_orbit(map_03, 0.1, 5)
    assert outside.status == "OutsideDomain"
    assert outside.returns == 0
    assert not outside.escaped

    with pytest.raises(ParameterError):
        simulate_orbit(map_03, start, -1)


def test_orbit_escape(map_03: PLMap, map_07: PLMap):
    assert orbit_escape_fraction(map_07, random_starts(map_07, 20, 5), 400) >= 0.9
    assert orbit_escape_fraction(map_03, random_starts(map_03, 20, 5), 100) == 0
    assert orbit_escape_fraction(map_03, [], 10) == 0


def test_branch_histogram():
    assert np.allclose(branch_histogram([1, 1, 2, 5], 3), [0.5, 0.25, 0, 0.25])


def test_transition_frequencies(map_03: PLMap):
    orbits = [simulate_orbit(map_03, x, 300).branches for x in random_starts(map_03, 20, 6)]
    results = transition_frequency_test(orbits, plmap=map_03, alpha=1e-6)
    assert [r.state for r in results] == [1, 2, 3]
    assert all(r.passed for r in results)
    assert all(r.dof >= 1 for r in results)

    with pytest.raises(ParameterError):
        transition_frequency_test([[1, 2]], 0.3)


def test_walk_escape_monotone():
    fractions = [simulate_walk(lam, 2000, 100, seed=16).escape_fraction for lam in (0.55, 0.6, 0.7)]
    assert fractions[0] < fractions[1] <= fractions[2]
    assert fractions[2] > 0.99


def test_walk_matches_orbit(map_03: PLMap):
    branches: list[int] = []
    for x in random_starts(map_03, 40, 7):
        report = simulate_orbit(map_03, x, 500)
        assert report.status == "ok"
        branches.extend(report.branches)

    chain = simulate_walk(0.3, 5000, 2000, seed=17)
    orbit: np.ndarray = branch_histogram(branches, len(chain.histogram) - 1)
    assert 0.5 * np.abs(orbit - np.asarray(chain.histogram)).sum() <= 0.03
