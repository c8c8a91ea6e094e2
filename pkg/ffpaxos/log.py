"""
Logging setup for ffpaxos.

Everything logs through the standard ``logging`` tree under ``ffpaxos``;
the CLI installs a single rich handler on stderr so stdout stays free for
reports and machine-readable output.
"""

import logging
import sys

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

ROOT = "ffpaxos"

_LEVELS = {
    0: logging.WARNING,
    1: logging.INFO,
}

# level -> markup for one-line CLI messages
_MARKUP = {
    "error": "[red]ERROR: {}[/]",
    "warning": "[yellow]WARN: {}[/]",
    "info": "[green]INFO: {}[/]",
}


def setup_logging(verbosity: int = 0) -> logging.Logger:
    """Install the rich handler on the package logger (idempotent)."""
    logger = logging.getLogger(ROOT)
    level = _LEVELS.get(verbosity, logging.DEBUG)
    logger.setLevel(level)

    for handler in list(logger.handlers):
        if getattr(handler, "_ffpaxos", False):
            logger.removeHandler(handler)

    handler = RichHandler(
        console=Console(file=sys.stderr),
        show_path=False,
        markup=True,
        rich_tracebacks=True,
    )
    handler._ffpaxos = True
    handler.setLevel(level)
    logger.addHandler(handler)
    logger.propagate = False
    return logger


def log_message(message: str, level: str = "info") -> None:
    """Log a one-liner with level colouring."""
    logger = logging.getLogger(ROOT)
    formatted = _MARKUP.get(level, _MARKUP["info"]).format(escape(message))
    if level == "error":
        logger.error(formatted)
    elif level == "warning":
        logger.warning(formatted)
    else:
        logger.info(formatted)
