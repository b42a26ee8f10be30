"""
GIANTWAVE Logger
================
One stdout handler on the "giantwave" logger; modules log through children
named after their file. The level comes from LOG_LEVEL or `--log-level`.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from giantwave.common.constants import LOG_LEVEL

ROOT_NAME = "giantwave"
LOG_FORMAT = '[%(levelname)s] %(name)s | %(message)s'


def _configure(level: str) -> logging.Logger:
    root = logging.getLogger(ROOT_NAME)
    root.setLevel(level)
    root.propagate = False
    if not root.handlers:
        handler = logging.StreamHandler(sys.stdout)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    return root


log = _configure(LOG_LEVEL)


def set_level(level: str) -> None:
    """Change the level of every giantwave logger, e.g. set_level("DEBUG")."""
    log.setLevel(level.upper())


def get_logger(file: Optional[str] = None) -> logging.Logger:
    """
    Child logger named after a module file.

    Usage:
        from giantwave.common.logger import get_logger
        log = get_logger(__file__)   # -> giantwave.integrator
    """
    if not file:
        return log
    return log.getChild(Path(file).stem)
