from pathlib import Path

import pytest

from fibotherm.kneading import fibonacci_kneading
from fibotherm.models.config import PRECISION_ENVVAR
from fibotherm.models.kneading import KneadingData
from fibotherm.models.plmap import PLMap
from fibotherm.plmap import fibonacci_family
from fibotherm.utils.functions import rm_tree


@pytest.fixture(scope="session")
def test_folder() -> Path:
    return Path(__file__).parent


@pytest.fixture(scope="session")
def temp_folder(test_folder: Path) -> Path:
    return test_folder / "tmp"


@pytest.fixture(scope="session")
def fibonacci_40() -> KneadingData:
    return fibonacci_kneading(40)


@pytest.fixture(scope="session")
def map_03() -> PLMap:
    return fibonacci_family(0.3, 200, 113)


@pytest.fixture(scope="session")
def map_05() -> PLMap:
    return fibonacci_family(0.5, 200, 113)


@pytest.fixture(scope="session")
def map_07() -> PLMap:
    return fibonacci_family(0.7, 200, 113)


@pytest.fixture(autouse=True)
def _clear_precision_env(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.delenv(PRECISION_ENVVAR, raising=False)


@pytest.fixture(autouse=True, scope="session")
def _pre_test(temp_folder: Path):
    rm_tree(temp_folder)
    temp_folder.mkdir(parents=True, exist_ok=True)
