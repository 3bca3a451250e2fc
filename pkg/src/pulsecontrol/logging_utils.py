"""Logging utilities for the pulse-control simulator."""
from __future__ import annotations

import functools
import os
from pathlib import Path
import sys
from typing import Any, Dict, Optional

from loguru import logger


CONSOLE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {extra[component]: <14} | {message}"
FILE_FORMAT = (
    "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {extra[component]: <14} | {name}:{line} | {message}"
)


def configure_logging(
    log_dir: Path,
    log_name: str,
    rotation: str = "1 week",
    log_config: Optional[Dict[str, Any]] = None,
    console: bool = True,
) -> Path:
    """Configure console and rotating file sinks for the given log name.

    Args:
        log_dir: Directory for log files
        log_name: Base name for log files
        rotation: Log rotation interval
        log_config: Optional ``logging`` section of the run configuration
        console: Whether to attach the stderr console sink

    Returns:
        Path of the log file
    """

    log_dir.mkdir(parents=True, exist_ok=True)
    log_path = log_dir / f"{log_name}.log"

    log_config = log_config or {}
    console_config = log_config.get("console", {})
    file_config = log_config.get("file", {})

    console_level = os.getenv("PULSECONTROL_LOG_LEVEL") or console_config.get("level", "INFO")
    file_level = file_config.get("level", "DEBUG")
    rotation = file_config.get("rotation", rotation)
    retention = file_config.get("retention", "90 days")

    logger.remove()

    # The formats reference extra[component]; every record must carry one.
    def _ensure_component(record: Dict[str, Any]) -> None:
        if "component" not in record["extra"]:
            record["extra"]["component"] = "app"

    logger.configure(patcher=_ensure_component)

    if console:
        # stdout carries command summaries, so logs go to stderr.
        logger.add(sys.stderr, level=console_level, format=CONSOLE_FORMAT)

    logger.add(
        log_path,
        level=file_level,
        rotation=rotation,
        retention=retention,
        enqueue=True,
        backtrace=True,
        diagnose=False,
        format=FILE_FORMAT,
    )
    return log_path


class LoggingContext:
    """Context manager for binding structured fields to log messages.

    Usage:
        with LoggingContext(command="oracle", topology="Common") as log:
            log.info("Evolving state")
    """

    def __init__(self, **kwargs: Any):
        self.bound_logger = logger
        self.fields = kwargs

    def __enter__(self):
        self.bound_logger = logger.bind(**self.fields)
        return self.bound_logger

    def __exit__(self, exc_type, exc_val, exc_tb):
        pass


def log_context(**kwargs: Any):
    """Decorator binding structured context for the duration of a call.

    Usage:
        @log_context(component="scan")
        def scan_tau(modes, spec):
            ...
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **func_kwargs):
            with logger.contextualize(**kwargs):
                return func(*args, **func_kwargs)

        return wrapper

    return decorator


__all__ = [
    "configure_logging",
    "LoggingContext",
    "log_context",
]
