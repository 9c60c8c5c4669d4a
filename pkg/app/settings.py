# app/settings.py

import os
from dataclasses import dataclass, replace
from functools import lru_cache

from app.constants import (
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_PRODUCT_OUTPUT_CAP,
    DEFAULT_RANK_TYPE_CAP,
    DEFAULT_SIM_BLOCK,
)


@dataclass(frozen=True)
class Settings:
    enumeration_cap: int
    product_output_cap: int
    rank_type_cap: int
    sim_block: int
    workers: int
    logging_config: str

    def with_overrides(self, **changes) -> "Settings":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


@lru_cache
def get_settings() -> Settings:
    """
    Зчитує налаштування з оточення (docker-compose, .env або shell).
    Кешується: змінні оточення читаються один раз на процес.
    """
    return Settings(
        enumeration_cap=_int_env("GUESSWORK_ENUMERATION_CAP", DEFAULT_ENUMERATION_CAP),
        product_output_cap=_int_env("GUESSWORK_PRODUCT_OUTPUT_CAP", DEFAULT_PRODUCT_OUTPUT_CAP),
        rank_type_cap=_int_env("GUESSWORK_RANK_TYPE_CAP", DEFAULT_RANK_TYPE_CAP),
        sim_block=_int_env("GUESSWORK_SIM_BLOCK", DEFAULT_SIM_BLOCK),
        workers=_int_env("GUESSWORK_WORKERS", 1),
        logging_config=os.getenv("GUESSWORK_LOGGING_CONFIG", "logging.ini"),
    )
