"""Logging setup for the command-line entry point."""

import logging
import sys

LOG_FORMAT = "[%(name)s] %(levelname)s: %(message)s"


def configure_logging(verbosity: int = 0, quiet: bool = False) -> None:
    """
    Install a single stderr handler on the package logger.

    Args:
        verbosity: Count of ``-v`` flags (0 = WARNING, 1 = INFO, 2+ = DEBUG)
        quiet: Restrict output to errors only
    """
    if quiet:
        level = logging.ERROR
    elif verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    logger = logging.getLogger("epscalc")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
