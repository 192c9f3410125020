"""
Logging setup: standard-library loggers routed into loguru
"""

import logging
import sys
from typing import Optional

from loguru import logger as _loguru_logger

from o2gasket.core.config import settings


class InterceptHandler(logging.Handler):
    """Forward standard logging records to loguru"""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = _loguru_logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        frame, depth = logging.currentframe(), 2
        while frame is not None and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        _loguru_logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logging(level: Optional[str] = None, json_logs: Optional[bool] = None) -> None:
    """
    Configure loguru as the single sink for the package

    Args:
        level: Minimum level name, defaults to settings.LOG_LEVEL
        json_logs: Emit serialized JSON records instead of text
    """
    level = (level or settings.LOG_LEVEL).upper()
    json_logs = settings.LOG_JSON if json_logs is None else json_logs

    _loguru_logger.remove()
    # stdout carries command output
    _loguru_logger.add(sys.stderr, level=level, serialize=json_logs)

    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)
    logging.getLogger("o2gasket").setLevel(level)
