import logging
import sys

from src.config import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_handler: logging.Handler | None = None


def setup_logging(level: str | None = None):
    """Route log records to the current stderr; safe to call repeatedly."""
    global _handler
    root = logging.getLogger()
    root.setLevel(level or settings.EFFECTIVE_LOG_LEVEL)
    if _handler is not None:
        root.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%H:%M:%S"))
    root.addHandler(_handler)


def report_success(message: str):
    """Human-facing status line."""
    print(message, file=sys.stderr)


def report_warning(message: str):
    print(f"warning: {message}", file=sys.stderr)


def report_error(message: str):
    print(f"error: {message}", file=sys.stderr)
