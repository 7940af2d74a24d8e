import logging
import sys
from typing import Optional

from groundstate.core.config import settings


def configure_logging(level: Optional[str] = None) -> None:
    """ログ設定 (stderr + 任意のファイル)"""
    handlers = [logging.StreamHandler(sys.stderr)]
    if settings.LOG_FILE:
        handlers.append(logging.FileHandler(settings.LOG_FILE))

    logging.basicConfig(
        level=getattr(logging, (level or settings.LOG_LEVEL).upper()),
        format=settings.LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
