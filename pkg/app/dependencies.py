# app/dependencies.py

from contextlib import contextmanager

from fastapi import HTTPException, status

from app.exceptions import CapExceededError
from app.settings import Settings, get_settings as _load_settings


def get_settings() -> Settings:
    """Залежність FastAPI; у тестах підміняється через app.dependency_overrides."""
    return _load_settings()


@contextmanager
def service_errors():
    """
    Помилки сервісів → HTTP:
    перевищений ліміт → 413, будь-яка інша ValueError (GuessworkError, pydantic) → 400.
    """
    try:
        yield
    except CapExceededError as exc:
        raise HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, detail=str(exc))
    except ValueError as exc:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc))
