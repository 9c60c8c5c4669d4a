import pytest

from app.models import Pmf
from app.services.channels import bec, bsc
from app.settings import get_settings


@pytest.fixture
def uniform_binary():
    """Рівномірний апріорний розподіл на {0, 1}."""
    return Pmf.uniform(2)


@pytest.fixture
def bern():
    """Фабрика Bern(p) з P(1) = p."""
    return Pmf.bernoulli


@pytest.fixture
def bec_half():
    return bec(0.5)


@pytest.fixture
def bsc_quarter():
    return bsc(0.25)


@pytest.fixture
def small_caps(monkeypatch):
    """
    Малі ліміти через змінні оточення, як у docker-compose.
    Кеш get_settings скидаємо до і після, щоб значення не "затікали" в інші тести.
    """
    monkeypatch.setenv("GUESSWORK_ENUMERATION_CAP", "64")
    monkeypatch.setenv("GUESSWORK_PRODUCT_OUTPUT_CAP", "8")
    get_settings.cache_clear()
    yield get_settings()
    get_settings.cache_clear()
