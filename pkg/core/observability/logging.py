"""
Structured logging for minima lab campaigns.
One JSON object per record on the diagnostic stream, so CSV on stdout stays clean.
"""
import logging
import json
import sys
from datetime import datetime, timezone
from typing import Dict, Any, Optional
from enum import Enum


class LogLevel(str, Enum):
    """Log severity levels."""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


def _default(value: Any) -> str:
    # Fractions, mpmath numbers and ScaleValues are logged by their string form.
    return str(value)


class StructuredLogger:
    """
    Structured logger that outputs JSON-formatted logs.
    The `text` format prints `severity message key=value ...` for interactive runs.
    """

    def __init__(self, name: str = "minima_lab", log_level: str = "INFO", log_format: str = "json"):
        self.name = name
        self.log_format = log_format
        self.logger = logging.getLogger(name)
        self.logger.setLevel(getattr(logging, log_level, logging.INFO))
        self.logger.propagate = False

        # Configure handler
        if not self.logger.handlers:
            handler = logging.StreamHandler(sys.stderr)
            handler.setFormatter(JsonFormatter())
            self.logger.addHandler(handler)

    def set_level(self, log_level: str):
        self.logger.setLevel(getattr(logging, log_level.upper(), logging.INFO))

    def _log(self, severity: str, message: str, **kwargs):
        """Internal log method with structured fields."""
        if not self.logger.isEnabledFor(getattr(logging, severity)):
            return

        if self.log_format == "text":
            fields = " ".join(f"{key}={value}" for key, value in kwargs.items())
            self.logger.log(getattr(logging, severity), f"{severity} {message} {fields}".rstrip())
            return

        log_entry = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "severity": severity,
            "message": message,
            "logger": self.name,
            **kwargs
        }
        self.logger.log(getattr(logging, severity), json.dumps(log_entry, default=_default))

    def debug(self, message: str, **kwargs):
        """Log debug message."""
        self._log(LogLevel.DEBUG.value, message, **kwargs)

    def info(self, message: str, **kwargs):
        """Log info message."""
        self._log(LogLevel.INFO.value, message, **kwargs)

    def warning(self, message: str, **kwargs):
        """Log warning message."""
        self._log(LogLevel.WARNING.value, message, **kwargs)

    def error(self, message: str, **kwargs):
        """Log error message."""
        self._log(LogLevel.ERROR.value, message, **kwargs)

    def critical(self, message: str, **kwargs):
        """Log critical message."""
        self._log(LogLevel.CRITICAL.value, message, **kwargs)

    # Campaign-specific logging methods

    def log_campaign_start(self, campaign: str, context: Optional[Dict[str, Any]] = None):
        """Log campaign start."""
        self.info(
            f"Campaign {campaign} started",
            campaign=campaign,
            event_type="campaign_start",
            context=context or {}
        )

    def log_campaign_complete(
        self,
        campaign: str,
        duration_ms: float,
        result: Optional[Dict[str, Any]] = None
    ):
        """Log campaign completion."""
        self.info(
            f"Campaign {campaign} completed",
            campaign=campaign,
            duration_ms=duration_ms,
            event_type="campaign_complete",
            result_summary=self._summarize_result(result)
        )

    def log_check_result(self, anchor: str, passed: bool, **details):
        """Log the outcome of one named check; failures are errors."""
        level = "info" if passed else "error"
        getattr(self, level)(
            f"Check {anchor} {'passed' if passed else 'FAILED'}",
            anchor=anchor,
            passed=passed,
            event_type="check_result",
            **details
        )

    def log_budget_exceeded(self, nodes: int, budget: int, context: Dict[str, Any]):
        self.warning(
            "Enumeration budget exceeded",
            nodes=nodes,
            budget=budget,
            event_type="budget_exceeded",
            **context
        )

    def log_error_with_context(self, error: Exception, context: Dict[str, Any]):
        """Log error with full context."""
        self.error(
            f"Error: {str(error)}",
            error_type=type(error).__name__,
            error_message=str(error),
            event_type="error",
            **context
        )

    def _summarize_result(self, result: Optional[Dict[str, Any]]) -> Dict[str, Any]:
        """Summarize result for logging (avoid logging large payloads)."""
        if not result:
            return {}

        summary = {}
        for key, value in result.items():
            if isinstance(value, (list, tuple)):
                summary[key] = f"<list of {len(value)} items>"
            elif isinstance(value, dict):
                summary[key] = f"<dict with {len(value)} keys>"
            elif isinstance(value, (str, int, float, bool)) or value is None:
                summary[key] = value
            else:
                summary[key] = str(value)

        return summary


class JsonFormatter(logging.Formatter):
    """JSON formatter for structured logging."""

    def format(self, record):
        """Format log record as JSON."""
        message = record.getMessage()
        # Already structured, or a text-format line
        if message.startswith('{') or message.split(" ", 1)[0] in LogLevel.__members__:
            return message

        log_entry = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "severity": record.levelname,
            "message": message,
            "logger": record.name
        }

        return json.dumps(log_entry)


# Global logger instance
_logger: Optional[StructuredLogger] = None


def get_logger(name: str = "minima_lab", log_level: Optional[str] = None, log_format: Optional[str] = None) -> StructuredLogger:
    """Get or create global logger instance."""
    global _logger
    if _logger is None:
        from .config import get_observability_config
        config = get_observability_config()
        _logger = StructuredLogger(name, log_level or config.log_level, log_format or config.log_format)
    return _logger


# Convenience instance
logger = get_logger()
