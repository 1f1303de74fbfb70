"""Structured logging for suite runs.

Every record emitted while a suite case runs carries the case identifier
``<suite>:<index>``, so the log of a parallel run can be split per case.
"""

import json
import logging
import sys
import time
from contextvars import ContextVar
from functools import wraps
from typing import Any, Callable, Optional
from uuid import uuid4

# Identifier of the suite case running in the current thread
case_id_var: ContextVar[Optional[str]] = ContextVar("case_id", default=None)

SIMPLE_FORMAT = "%(asctime)s %(levelname)-8s %(name)s [%(case_id)s] %(message)s"


class StructuredFormatter(logging.Formatter):
    """One JSON object per record, with case id and extra fields merged in."""

    def format(self, record: logging.LogRecord) -> str:
        entry: dict[str, Any] = {
            "timestamp": self.formatTime(record, "%Y-%m-%dT%H:%M:%S"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "source": f"{record.module}.{record.funcName}:{record.lineno}",
            "thread": record.threadName,
        }
        case_id = case_id_var.get()
        if case_id is not None:
            entry["case_id"] = case_id
        entry.update(getattr(record, "extra_fields", None) or {})
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        # Fractions, windows and algebra values fall back to str()
        return json.dumps(entry, default=str)


class CaseIdFilter(logging.Filter):
    """Expose the current case id as ``%(case_id)s`` for plain-text formats."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.case_id = case_id_var.get() or "-"
        return True


def _make_handler(log_file: Optional[str]) -> logging.Handler:
    if log_file:
        return logging.FileHandler(log_file)
    return logging.StreamHandler(sys.stderr)


def setup_logging(
    level: str = "INFO", format_type: str = "json", log_file: Optional[str] = None
) -> None:
    """Route all logging to one handler on the root logger.

    Results go to stdout, so logs default to stderr.

    Args:
        level: Log level name
        format_type: 'json' for structured records, 'simple' for one text line each
        log_file: Write to this file instead of stderr
    """
    handler = _make_handler(log_file)
    if format_type == "json":
        handler.setFormatter(StructuredFormatter())
    else:
        handler.addFilter(CaseIdFilter())
        handler.setFormatter(logging.Formatter(SIMPLE_FORMAT))

    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel(level.upper())

    # hypothesis reports every shrink step at INFO
    logging.getLogger("hypothesis").setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def with_case_id(case_id: Optional[str] = None) -> Callable:
    """Decorator running the function with ``case_id_var`` set.

    Args:
        case_id: Identifier to use; a fresh ``adhoc-<hex>`` id when omitted
    """

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            token = case_id_var.set(case_id or f"adhoc-{uuid4().hex[:12]}")
            try:
                return func(*args, **kwargs)
            finally:
                case_id_var.reset(token)

        return wrapper

    return decorator


def log_execution_time(
    logger: Optional[logging.Logger] = None, level: int = logging.DEBUG
) -> Callable:
    """Decorator logging how long each call took.

    Failures are logged at ERROR with the traceback and re-raised.

    Args:
        logger: Logger to use; defaults to the function's module logger
        level: Level of the timing record on success
    """

    def decorator(func: Callable) -> Callable:
        log = logger or get_logger(func.__module__)

        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                log.error(
                    f"{func.__qualname__} raised {type(e).__name__}: {e}",
                    extra={"extra_fields": {"elapsed_ms": elapsed_ms_since(start)}},
                    exc_info=True,
                )
                raise
            log.log(
                level,
                f"{func.__qualname__} finished",
                extra={"extra_fields": {"elapsed_ms": elapsed_ms_since(start)}},
            )
            return result

        return wrapper

    return decorator


def elapsed_ms_since(start: float) -> int:
    return int((time.perf_counter() - start) * 1000)


class LogContext(logging.Filter):
    """Attach fixed fields to every record a logger emits inside a block.

    Installed as a filter on the logger, so records from worker threads
    get the fields too. Fields given on the record itself win.
    """

    def __init__(self, logger: logging.Logger, **fields: Any):
        super().__init__()
        self.logger = logger
        self.fields = fields

    def filter(self, record: logging.LogRecord) -> bool:
        record.extra_fields = {
            **self.fields,
            **(getattr(record, "extra_fields", None) or {}),
        }
        return True

    def __enter__(self) -> "LogContext":
        self.logger.addFilter(self)
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        self.logger.removeFilter(self)
