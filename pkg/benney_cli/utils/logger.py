import logging

from rich.console import Console
from rich.logging import RichHandler

ROOT_LOGGER = "benney_cli"

# stdout may carry CSV/JSON artifacts, so status lines and log records go to stderr
console = Console(stderr=True)


def setup_logging(verbosity=0):
    """Install a RichHandler on the package logger; 0 -> WARNING, 1 -> INFO, 2+ -> DEBUG."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG

    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(
            console=console,
            show_path=False,
            rich_tracebacks=False,
            markup=False,
        )
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
    return logger
