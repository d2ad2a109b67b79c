"""
Observability package for the minima lab.
Provides structured logging, tracing, and metrics.
"""

from .logging import logger, get_logger, StructuredLogger
from .tracing import tracer, get_tracer, LabTracer
from .metrics import metrics, get_metrics, LabMetrics
from .config import ObservabilityConfig, get_observability_config

__all__ = [
    # Logging
    'logger',
    'get_logger',
    'StructuredLogger',
    # Tracing
    'tracer',
    'get_tracer',
    'LabTracer',
    # Metrics
    'metrics',
    'get_metrics',
    'LabMetrics',
    # Config
    'ObservabilityConfig',
    'get_observability_config',
]
