#!/usr/bin/env python3
"""
Logging setup shared by the CLI and joblib worker processes
"""

import logging
import os
import sys
from typing import Optional, Tuple, Union

import structlog

_configured: Optional[Tuple[int, int]] = None


def resolve_level(level: Union[int, str, None]) -> int:
    """Numeric level from a name, a number or HAMMERSLEY_LOG_LEVEL (default INFO)"""
    if level is None:
        level = os.getenv("HAMMERSLEY_LOG_LEVEL", "INFO")
    if isinstance(level, int):
        return level
    value = logging.getLevelName(level.strip().upper())
    return value if isinstance(value, int) else logging.INFO


def configure_logging(level: Union[int, str, None] = None):
    """stdlib logging on stderr; structlog renders key/value lines and hands them to stdlib"""
    global _configured
    level = resolve_level(level)
    # stderr is swapped under test runners, so it is part of the key
    key = (level, id(sys.stderr))
    if _configured == key:
        return
    logging.basicConfig(level=level, stream=sys.stderr, force=True)
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )
    _configured = key
