# this_file: src/qsmkit/utils/logging.py
"""Centralized logging configuration using Loguru."""

import sys

from loguru import logger

FORMAT = (
    "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Send logs to stderr only; stdout is reserved for JSON summaries.

    ``verbose`` enables DEBUG, ``quiet`` keeps warnings and errors only.
    """
    logger.remove()
    level = "DEBUG" if verbose else "WARNING" if quiet else "INFO"
    logger.add(sys.stderr, level=level, format=FORMAT, colorize=True)
