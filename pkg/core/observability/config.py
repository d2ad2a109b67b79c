"""
Observability settings for the minima lab, read from the environment.
"""
import os
from typing import Literal, Optional

from pydantic import BaseModel, field_validator

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _env_flag(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


class ObservabilityConfig(BaseModel):
    """Log threshold and format, tracing and metrics switches, optional metrics dump path."""

    log_level: str = "INFO"
    log_format: Literal["json", "text"] = "json"
    enable_tracing: bool = False
    enable_metrics: bool = True
    metrics_textfile: Optional[str] = None

    @field_validator("log_level", mode="before")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = str(value).strip().upper()
        return value if value in LOG_LEVELS else "INFO"

    @classmethod
    def from_env(cls) -> "ObservabilityConfig":
        return cls(
            log_level=os.getenv("LOG_LEVEL", "INFO"),
            log_format="text" if os.getenv("LOG_FORMAT", "json").strip().lower() == "text" else "json",
            enable_tracing=_env_flag("ENABLE_TRACING", False),
            enable_metrics=_env_flag("ENABLE_METRICS", True),
            metrics_textfile=os.getenv("METRICS_TEXTFILE") or None,
        )


_config: Optional[ObservabilityConfig] = None


def get_observability_config() -> ObservabilityConfig:
    """Process-wide settings, read from the environment on first use."""
    global _config
    if _config is None:
        _config = ObservabilityConfig.from_env()
    return _config
