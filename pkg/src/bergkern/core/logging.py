"""Logging setup for the bergkern package logger."""

import logging
from typing import Optional, TextIO

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "INFO", stream: Optional[TextIO] = None) -> logging.Logger:
    """
    Install a single stream handler on the ``bergkern`` logger.

    Calling it again replaces the handler instead of stacking a second one, so the CLI
    and tests can reconfigure freely.

    Args:
        level: Log level name (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        stream: Target stream, stderr when None

    Returns:
        The configured ``bergkern`` logger
    """
    logger = logging.getLogger("bergkern")
    for handler in list(logger.handlers):
        if getattr(handler, "_bergkern", False):
            logger.removeHandler(handler)

    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._bergkern = True  # type: ignore[attr-defined]
    logger.addHandler(handler)
    logger.setLevel(level.upper())
    logger.propagate = False
    return logger
