import logging
import logging.config
import os
from typing import Optional

from app.settings import get_settings


def configure_logging(path: Optional[str] = None) -> None:
    path = path or get_settings().logging_config
    if os.path.exists(path):
        logging.config.fileConfig(path, disable_existing_loggers=False)
    else:
        logging.basicConfig(
            level=logging.WARNING,
            format="%(levelname)-5.5s [%(name)s] %(message)s",
        )
