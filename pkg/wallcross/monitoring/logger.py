"""
Structured logging for the engines: key=value context on every event.
"""

import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, TextIO

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'


@dataclass
class LogEvent:
    timestamp: float = field(default_factory=time.time)
    level: str = "INFO"
    message: str = ""
    context: Dict[str, Any] = field(default_factory=dict)


def configure_logging(level: str = "WARNING", stream: Optional[TextIO] = None) -> logging.Logger:
    """Attach a single stderr handler to the wallcross logger tree.

    Args:
        level: Level name, e.g. "DEBUG"
        stream: Target stream, stderr by default

    Returns:
        The package root logger
    """
    root = logging.getLogger("wallcross")
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
    for handler in list(root.handlers):
        if getattr(handler, "_wallcross", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._wallcross = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    return root


class MonitoringLogger:
    """Wraps a named logger; handlers are left to configure_logging"""

    def __init__(self, name: str):
        self.logger = logging.getLogger(name)

    def log_event(self, level: str, message: str, **context: Any) -> LogEvent:
        """Log an event with context."""
        event = LogEvent(level=level, message=message, context=context)
        log_method = getattr(self.logger, level.lower(), self.logger.info)
        if self.logger.isEnabledFor(getattr(logging, level.upper(), logging.INFO)):
            context_str = " ".join(f"{k}={v}" for k, v in context.items())
            log_method(f"{message} {context_str}".rstrip())
        return event

    def info(self, message: str, **context: Any) -> LogEvent:
        """Log an info message."""
        return self.log_event("INFO", message, **context)

    def warning(self, message: str, **context: Any) -> LogEvent:
        """Log a warning message."""
        return self.log_event("WARNING", message, **context)

    def error(self, message: str, **context: Any) -> LogEvent:
        """Log an error message."""
        return self.log_event("ERROR", message, **context)

    def debug(self, message: str, **context: Any) -> LogEvent:
        """Log a debug message."""
        return self.log_event("DEBUG", message, **context)


class PerformanceLogger(MonitoringLogger):
    def __init__(self, name: str):
        super().__init__(name)
        self._timers: Dict[str, float] = {}

    def start_timer(self, name: str) -> None:
        """Start timing an operation."""
        self._timers[name] = time.perf_counter()

    def stop_timer(self, name: str, **context: Any) -> Optional[float]:
        """Stop timing an operation and log the duration."""
        start_time = self._timers.pop(name, None)
        if start_time is None:
            self.warning(f"Timer {name} was not started")
            return None
        duration = time.perf_counter() - start_time
        self.info(f"Operation {name} completed", duration=f"{duration:.3f}s", **context)
        return duration
