import pytest
from orjson import loads
from pydantic import ValidationError

from fibotherm.exceptions import KneadingIndexError
from fibotherm.exceptions import ParameterError
from fibotherm.kneading import check_admissibility
from fibotherm.kneading import check_condition_121
from fibotherm.kneading import fibonacci_kneading
from fibotherm.kneading import floor_r_kneading
from fibotherm.kneading import kneading_from_sequence
from fibotherm.kneading import kneading_sides
from fibotherm.models.kneading import KneadingData


def _fibonacci_numbers(n: int) -> list[int]:
    numbers: list[int] = [1, 2]
    while len(numbers) < n:
        numbers.append(numbers[-1] + numbers[-2])
    return numbers[:n]


def test_fibonacci_kneading(fibonacci_40: KneadingData):
    assert fibonacci_40.K == 40
    assert fibonacci_40.Q[:6] == (0, 0, 0, 1, 2, 3)
    assert fibonacci_40.S[:7] == (1, 2, 3, 5, 8, 13, 21)
    assert all(fibonacci_40.Q[k] == max(k - 2, 0) for k in range(1, 41))


def test_fibonacci_cutting_times_exact():
    kneading: KneadingData = fibonacci_kneading(120)
    assert list(kneading.S) == _fibonacci_numbers(121)
    assert kneading.S[100] > 2**64
    assert isinstance(kneading.S[120], int)


def test_kneading_accessors(fibonacci_40: KneadingData):
    assert fibonacci_40.q(0) == 0
    assert fibonacci_40.q(5) == 3
    assert fibonacci_40.q2(5) == 1
    assert fibonacci_40.cutting_time(-1) == 1
    assert fibonacci_40.cutting_time(4) == 8

    with pytest.raises(KneadingIndexError):
        fibonacci_40.q(41)

    with pytest.raises(KneadingIndexError):
        fibonacci_40.cutting_time(41)


def test_kneading_from_sequence():
    kneading: KneadingData = kneading_from_sequence([0, 0, 1, 2, 2])
    assert kneading.Q == (0, 0, 0, 1, 2, 2)
    assert kneading.S == (1, 2, 3, 5, 8, 11)

    with pytest.raises(ParameterError):
        kneading_from_sequence([])

    with pytest.raises(ParameterError):
        kneading_from_sequence([0, 2])


def test_kneading_validation():
    with pytest.raises(ValidationError):
        KneadingData(Q=(0, 0, 0), S=(1, 2, 4), K=2)

    with pytest.raises(ValidationError):
        KneadingData(Q=(1, 0), S=(1, 2), K=1)


def test_kneading_json(fibonacci_40: KneadingData):
    data = loads(fibonacci_40.model_dump_json())
    assert set(data) == {"Q", "S", "K"}
    assert KneadingData.model_validate(data) == fibonacci_40


def test_floor_r_kneading():
    kneading: KneadingData = floor_r_kneading(0.5, 10)
    assert kneading.Q == (0, 0, 0, 1, 2, 2, 3, 3, 4, 4, 5)

    with pytest.raises(ParameterError):
        floor_r_kneading(1.0, 10)

    with pytest.raises(ParameterError):
        floor_r_kneading(0.5, 0)


def test_condition_121(fibonacci_40: KneadingData):
    assert check_condition_121(fibonacci_40) == (True, None)
    assert check_condition_121(kneading_from_sequence([0] * 10)) == (False, 2)

    with pytest.raises(KneadingIndexError):
        check_condition_121(fibonacci_40, 40)


def test_admissibility(fibonacci_40: KneadingData):
    report = check_admissibility(fibonacci_40)
    assert report
    assert report.depth == 40
    assert report.first_failure is None

    for r in (0.3, 0.5, 0.7):
        kneading: KneadingData = floor_r_kneading(r, 60)
        if check_condition_121(kneading)[0]:
            assert check_admissibility(kneading).admissible


def test_kneading_sides(fibonacci_40: KneadingData):
    sides: tuple[int, ...] = kneading_sides(fibonacci_40)
    assert len(sides) == 41
    assert sides[:9] == (1, 0, 0, 1, 1, 0, 0, 1, 1)
    assert all(sides[k] == 1 - sides[fibonacci_40.Q[k]] for k in range(1, 41))
