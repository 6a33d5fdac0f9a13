import pytest

from probedock.config import default_plant


@pytest.fixture(scope="session")
def plant():
    return default_plant()
