"""Debug instrumentation for suite runs and algebra kernels."""

import json
import logging
import time
from collections.abc import Sized
from contextlib import contextmanager
from functools import wraps
from pathlib import Path
from threading import Lock
from typing import Any, Callable, Iterator, Optional

from pydantic import BaseModel

from .config import CSConfig
from .logging_config import elapsed_ms_since, get_logger

logger = get_logger(__name__)


class DebugContext:
    """Timed checkpoints inside one block, summarized when the block exits.

    Args:
        label: Name used in the completion record
    """

    def __init__(self, label: str = "block") -> None:
        self.label = label
        self.start: Optional[float] = None
        self.checkpoints: list[dict[str, Any]] = []
        self.debug_info: dict[str, Any] = {}

    def checkpoint(self, name: str, data: Optional[dict[str, Any]] = None) -> None:
        entry: dict[str, Any] = {
            "name": name,
            "elapsed_ms": 0 if self.start is None else elapsed_ms_since(self.start),
        }
        if data:
            entry["data"] = data
        self.checkpoints.append(entry)
        logger.debug(f"Debug checkpoint: {name}", extra={"extra_fields": entry})

    def __enter__(self) -> "DebugContext":
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        if self.start is None:
            return
        self.debug_info = {
            "label": self.label,
            "total_ms": elapsed_ms_since(self.start),
            "checkpoints": self.checkpoints,
        }
        if exc_type is not None:
            self.debug_info["error"] = f"{exc_type.__name__}: {exc_val}"
        logger.debug(
            f"Debug context {self.label} completed",
            extra={"extra_fields": self.debug_info},
        )


def _describe(value: Any) -> str:
    # Algebra values can print to megabytes; log their type and term count only
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Sized) and not isinstance(value, str):
        return f"{type(value).__name__}[{len(value)}]"
    return type(value).__name__


def trace_kernel(func: Callable) -> Callable:
    """Log entry, exit and failure of a heavy kernel at DEBUG."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        if not logger.isEnabledFor(logging.DEBUG):
            return func(*args, **kwargs)
        call = {
            "kernel": func.__qualname__,
            "args": [_describe(a) for a in args],
            "kwargs": {k: _describe(v) for k, v in sorted(kwargs.items())},
        }
        logger.debug(f"Kernel started: {func.__name__}", extra={"extra_fields": call})
        start = time.perf_counter()
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.debug(
                f"Kernel failed: {func.__name__}",
                extra={
                    "extra_fields": {
                        **call,
                        "elapsed_ms": elapsed_ms_since(start),
                        "error_type": type(e).__name__,
                    }
                },
            )
            raise
        logger.debug(
            f"Kernel completed: {func.__name__}",
            extra={
                "extra_fields": {
                    **call,
                    "elapsed_ms": elapsed_ms_since(start),
                    "result": _describe(result),
                }
            },
        )
        return result

    return wrapper


def debug_config(config: CSConfig) -> None:
    """Log the active configuration and which fields differ from the defaults."""
    changed = sorted(config.model_dump(exclude_defaults=True))
    logger.debug(
        "Configuration",
        extra={"extra_fields": {"config": config.model_dump(), "non_default": changed}},
    )


@contextmanager
def debug_mode(enable: bool = True) -> Iterator[None]:
    """Lower the package logger to DEBUG inside the block."""
    if not enable:
        yield
        return
    package_logger = logging.getLogger(__package__ or "cs_fermionic")
    previous = package_logger.level
    package_logger.setLevel(logging.DEBUG)
    try:
        yield
    finally:
        package_logger.setLevel(previous)


def dump_debug_info(
    report: BaseModel, config: CSConfig, filename: Optional[str] = None
) -> Optional[str]:
    """Write a suite report and the config that produced it to a JSON file.

    Does nothing unless debug mode is enabled in the config.

    Args:
        report: Suite report to dump
        config: Configuration of the run
        filename: Target file; ``debug_<suite>_<unix time>.json`` by default

    Returns:
        The file written, or None when nothing was written
    """
    if not config.enable_debug_mode:
        return None

    payload = report.model_dump(mode="json")
    failing = [
        case["index"] for case in payload.get("cases", []) if case["status"] == "fail"
    ]
    target = Path(
        filename or f"debug_{payload.get('suite', 'report')}_{int(time.time())}.json"
    )
    try:
        target.write_text(
            json.dumps(
                {
                    "written_at": time.time(),
                    "config": config.model_dump(),
                    "failing_cases": failing,
                    "report": payload,
                },
                indent=2,
                sort_keys=True,
            )
        )
    except OSError as e:
        logger.error(
            f"Failed to dump debug info: {e}",
            extra={"extra_fields": {"file": str(target)}},
        )
        return None
    logger.debug(
        f"Debug info dumped to {target}", extra={"extra_fields": {"failing": failing}}
    )
    return str(target)


class DebugStats:
    """Thread-safe collector of per-metric samples."""

    def __init__(self) -> None:
        self.stats: dict[str, list[float]] = {}
        self._lock = Lock()

    def record(self, metric: str, value: float) -> None:
        with self._lock:
            self.stats.setdefault(metric, []).append(value)

    def summary(self) -> dict[str, dict[str, float]]:
        with self._lock:
            samples = {metric: list(values) for metric, values in self.stats.items()}
        return {
            metric: {
                "count": len(values),
                "total": sum(values),
                "min": min(values),
                "max": max(values),
                "avg": sum(values) / len(values),
            }
            for metric, values in samples.items()
            if values
        }

    def log_summary(self) -> None:
        logger.debug("Debug statistics summary", extra={"extra_fields": self.summary()})
