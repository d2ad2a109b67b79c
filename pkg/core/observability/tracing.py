"""
OpenTelemetry tracing for minima lab campaigns and engine operations.
Spans are exported to stderr only when ENABLE_TRACING=true.
"""
import sys
import time
from typing import Optional, Callable
from functools import wraps
from contextlib import contextmanager

try:
    from opentelemetry import trace
    from opentelemetry.sdk.trace import TracerProvider
    from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter
    from opentelemetry.sdk.resources import Resource
    OTEL_AVAILABLE = True
except ImportError:
    OTEL_AVAILABLE = False


class LabTracer:
    """
    OpenTelemetry tracer for the minima lab.
    Disabled tracers make every decorator a plain pass-through.
    """

    def __init__(self, service_name: str = "minima-lab", enabled: bool = False):
        self.service_name = service_name
        self.enabled = enabled and OTEL_AVAILABLE

        if not self.enabled:
            return

        resource = Resource.create({
            "service.name": service_name,
            "service.version": "1.0.0"
        })
        provider = TracerProvider(resource=resource)
        provider.add_span_processor(BatchSpanProcessor(ConsoleSpanExporter(out=sys.stderr)))
        trace.set_tracer_provider(provider)
        self.provider = provider
        self.tracer = trace.get_tracer(__name__)

    def flush(self):
        """Export pending spans."""
        if self.enabled:
            self.provider.force_flush()

    @contextmanager
    def trace_span(self, name: str, attributes: Optional[dict] = None):
        """Create a trace span context manager."""
        if not self.enabled:
            yield None
            return

        with self.tracer.start_as_current_span(name) as span:
            if attributes:
                for key, value in attributes.items():
                    span.set_attribute(key, str(value))
            yield span

    def _traced(self, kind: str, name: str) -> Callable:
        def decorator(func: Callable) -> Callable:
            @wraps(func)
            def wrapper(*args, **kwargs):
                if not self.enabled:
                    return func(*args, **kwargs)

                with self.trace_span(f"{kind}.{name}", attributes={f"{kind}.name": name}) as span:
                    start_time = time.time()
                    try:
                        result = func(*args, **kwargs)
                        span.set_attribute(f"{kind}.status", "success")
                        return result
                    except Exception as e:
                        span.set_attribute(f"{kind}.status", "error")
                        span.set_attribute("error.type", type(e).__name__)
                        span.set_attribute("error.message", str(e))
                        raise
                    finally:
                        span.set_attribute(f"{kind}.duration_ms", (time.time() - start_time) * 1000)

            return wrapper
        return decorator

    def trace_campaign(self, campaign_name: str):
        """Decorator to trace a campaign."""
        return self._traced("campaign", campaign_name)

    def trace_operation(self, operation_name: str):
        """Decorator to trace an engine operation."""
        return self._traced("operation", operation_name)


# Global tracer instance
_tracer: Optional[LabTracer] = None


def get_tracer(service_name: str = "minima-lab", enabled: Optional[bool] = None) -> LabTracer:
    """Get or create global tracer instance."""
    global _tracer
    if _tracer is None:
        if enabled is None:
            from .config import get_observability_config
            enabled = get_observability_config().enable_tracing
        _tracer = LabTracer(service_name, enabled)
    return _tracer


# Convenience instance
tracer = get_tracer()
