"""
Logging setup for the library and the command line
"""

import logging
import sys
from typing import Optional, TextIO

from .config import get_config

# Loggers that are chatty at INFO when pulled in by pandas or scipy
_QUIET = ("matplotlib", "numexpr", "fsspec")


def setup_logging(log_level: Optional[str] = None, stream: Optional[TextIO] = None):
    """
    Configure the root logger from the ``logging`` section of the configuration.

    Records go to stderr so CSV written to stdout stays clean. An explicit
    level (the CLI's ``--log-level``) replaces any earlier setup; otherwise an
    existing setup is kept. numpy and scipy RuntimeWarnings, such as overflow
    in a clipped exponent, are routed through ``py.warnings``.
    """
    section = get_config().get_section("logging")
    level_name = (log_level or section.get("level") or "INFO").upper()
    level = logging.getLevelName(level_name)
    if not isinstance(level, int):
        level = logging.INFO

    logging.basicConfig(
        level=level,
        format=section.get("format"),
        handlers=[logging.StreamHandler(stream or sys.stderr)],
        force=log_level is not None,
    )
    logging.captureWarnings(True)

    for name in _QUIET:
        logging.getLogger(name).setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """Get logger instance"""
    return logging.getLogger(name)
