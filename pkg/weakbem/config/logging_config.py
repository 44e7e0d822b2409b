"""Structured logging for library and CLI runs. Log files are written under ./tmp/."""
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional

import structlog

LOG_DIR = Path("./tmp")

# numba's compiler logs every pass at DEBUG
_NOISY_LOGGERS = ("numba",)


def _level_number(log_level: str) -> int:
    level = logging.getLevelName(str(log_level).upper())
    if not isinstance(level, int):
        raise ValueError(f"unknown log level '{log_level}'")
    return level


def _processors(json_output: bool) -> List[Any]:
    shared = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_logger_name,
        structlog.processors.add_log_level,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.TimeStamper(fmt="iso"),
    ]
    if json_output:
        return shared + [structlog.processors.format_exc_info, structlog.processors.JSONRenderer()]
    return shared + [structlog.dev.set_exc_info, structlog.dev.ConsoleRenderer()]


def setup_logging(
    log_level: str = "INFO",
    log_file: Optional[str] = None
) -> None:
    """
    Configure structured logging.

    Console records go to stderr; stdout is reserved for CSV and JSON results.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional file name under ./tmp/; switches records to JSON lines
    """
    level = _level_number(log_level)
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        LOG_DIR.mkdir(exist_ok=True)
        handlers.append(logging.FileHandler(LOG_DIR / log_file))

    logging.basicConfig(format="%(message)s", level=level, handlers=handlers, force=True)
    for name in _NOISY_LOGGERS:
        logging.getLogger(name).setLevel(max(level, logging.WARNING))

    structlog.configure(
        processors=_processors(json_output=bool(log_file)),
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True
    )


def bind_run_context(**values: Any) -> None:
    """Attach key/value context (experiment, mesh level, wavenumber) to every following record."""
    structlog.contextvars.bind_contextvars(**values)


def clear_run_context() -> None:
    structlog.contextvars.clear_contextvars()


def get_logger(name: str) -> structlog.BoundLogger:
    """Get a structured logger instance."""
    return structlog.get_logger(name)
