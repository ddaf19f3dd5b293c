"""Structured logger implementation."""

import logging
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

import structlog


class LogLevel(Enum):
    """Log levels."""
    DEBUG = 0
    INFO = 1
    WARNING = 2
    ERROR = 3
    CRITICAL = 4

    @property
    def stdlib_level(self) -> int:
        return getattr(logging, self.name)

    @classmethod
    def from_name(cls, name: str) -> "LogLevel":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"Unknown log level '{name}'") from None


def configure_logging(level: LogLevel = LogLevel.INFO):
    """Route module-level structlog loggers to stderr, filtered at ``level``."""
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level.stdlib_level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


class StructuredLogger:
    """Structured logger for the application.

    Console lines are rendered for humans (warnings and above on stderr);
    the log file receives one JSON object per line.
    """

    def __init__(
        self,
        log_file: Optional[Path] = None,
        level: LogLevel = LogLevel.INFO,
        enable_console: bool = True
    ):
        self.log_file = Path(log_file) if log_file else None
        self.level = level
        self.enable_console = enable_console
        self._file_handle = None

        configure_logging(level)

        shared = [structlog.processors.add_log_level, structlog.processors.TimeStamper(fmt="iso")]
        self._stdout = structlog.wrap_logger(
            structlog.PrintLogger(sys.stdout), processors=shared + [structlog.dev.ConsoleRenderer(colors=False)]
        )
        self._stderr = structlog.wrap_logger(
            structlog.PrintLogger(sys.stderr), processors=shared + [structlog.dev.ConsoleRenderer(colors=False)]
        )

        self._file = None
        if self.log_file:
            self.log_file.parent.mkdir(parents=True, exist_ok=True)
            self._file_handle = open(self.log_file, "a", encoding="utf-8")
            self._file = structlog.wrap_logger(
                structlog.WriteLogger(self._file_handle), processors=shared + [structlog.processors.JSONRenderer()]
            )

    def debug(self, message: str, **kwargs):
        self._log(LogLevel.DEBUG, message, **kwargs)

    def info(self, message: str, **kwargs):
        self._log(LogLevel.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs):
        """Divergence flags, discarded samples and other recoverable conditions."""
        self._log(LogLevel.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs):
        self._log(LogLevel.ERROR, message, **kwargs)

    def _log(self, level: LogLevel, message: str, **kwargs):
        if level.value < self.level.value:
            return

        method = level.name.lower()
        if self.enable_console:
            console = self._stderr if level.value >= LogLevel.WARNING.value else self._stdout
            getattr(console, method)(message, **kwargs)

        if self._file is not None:
            getattr(self._file, method)(message, **kwargs)
            self._file_handle.flush()

    def close(self):
        if self._file_handle is not None:
            self._file_handle.close()
            self._file_handle = None
            self._file = None

    def log_run_start(self, command: str, settings: Dict[str, Any]):
        """Record the CLI command and the resolved settings it runs with."""
        self.info("run_started", command=command, settings=settings)

    def log_run_complete(self, command: str, records: int, duration: float):
        rate = records / duration if duration > 0 else 0
        self.info("run_completed", command=command, records=records, duration=duration, records_per_second=rate)

    def log_calibration(self, name: str, values: Dict[str, Any]):
        """Record a working point, polarization or scale-factor result."""
        self.info("calibration", name=name, **values)

    def log_error(self, error: Exception, context: Optional[str] = None):
        self.error("error_occurred", error_type=type(error).__name__, error_message=str(error), context=context)
