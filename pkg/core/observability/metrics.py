"""
Prometheus metrics for the minima lab.
Engine effort and check outcomes, exposed as Prometheus text on demand.
"""
import time
from typing import Dict, Optional, Tuple
from contextlib import contextmanager

try:
    from prometheus_client import CollectorRegistry, Counter, Histogram, Info, generate_latest, write_to_textfile
    PROMETHEUS_AVAILABLE = True
except ImportError:
    PROMETHEUS_AVAILABLE = False


class LabMetrics:
    """
    Prometheus metrics collector with a private registry.
    """

    def __init__(self, enabled: bool = True):
        self.enabled = enabled and PROMETHEUS_AVAILABLE

        if not self.enabled:
            return

        self.registry = CollectorRegistry()

        # Engine metrics
        self.minima_computations = Counter(
            'minima_lab_minima_computations_total',
            'Total number of successive-minima computations',
            ['method'],
            registry=self.registry
        )

        self.minima_duration = Histogram(
            'minima_lab_minima_duration_seconds',
            'Successive-minima computation duration in seconds',
            ['method'],
            buckets=(0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0),
            registry=self.registry
        )

        self.enumeration_nodes = Counter(
            'minima_lab_enumeration_nodes_total',
            'Enumeration nodes visited',
            ['method'],
            registry=self.registry
        )

        # Domain metrics
        self.events_detected = Counter(
            'minima_lab_events_detected_total',
            'Front-facet events detected',
            ['mode'],
            registry=self.registry
        )

        self.checks = Counter(
            'minima_lab_checks_total',
            'Checks evaluated',
            ['anchor', 'status'],
            registry=self.registry
        )

        self.lemma_trials = Counter(
            'minima_lab_lemma_trials_total',
            'Randomized lemma trials',
            ['outcome'],
            registry=self.registry
        )

        # Campaign metrics
        self.campaign_duration = Histogram(
            'minima_lab_campaign_duration_seconds',
            'Campaign duration in seconds',
            ['campaign', 'status'],
            buckets=(0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 120.0, 600.0),
            registry=self.registry
        )

        # Error metrics
        self.errors = Counter(
            'minima_lab_errors_total',
            'Total number of errors',
            ['error_type', 'component'],
            registry=self.registry
        )

        self.info = Info(
            'minima_lab_build',
            'Build information',
            registry=self.registry
        )
        self.info.info({
            'version': '1.0.0',
            'service': 'minima-lab'
        })

    def record_minima(self, method: str, duration_seconds: float, nodes: int):
        """Record one successive-minima computation."""
        if not self.enabled:
            return

        self.minima_computations.labels(method=method).inc()
        self.minima_duration.labels(method=method).observe(duration_seconds)
        self.enumeration_nodes.labels(method=method).inc(nodes)

    def record_enumeration(self, method: str, nodes: int):
        if not self.enabled:
            return
        self.enumeration_nodes.labels(method=method).inc(nodes)

    def record_event(self, mode: str):
        if not self.enabled:
            return
        self.events_detected.labels(mode=mode).inc()

    def record_check(self, anchor: str, passed: bool):
        """Record a check outcome."""
        if not self.enabled:
            return

        self.checks.labels(anchor=anchor, status="pass" if passed else "fail").inc()

    def record_lemma_trial(self, outcome: str):
        if not self.enabled:
            return
        self.lemma_trials.labels(outcome=outcome).inc()

    def record_error(self, error_type: str, component: str):
        """Record error metrics."""
        if not self.enabled:
            return

        self.errors.labels(error_type=error_type, component=component).inc()

    @contextmanager
    def track_campaign(self, campaign: str):
        """Context manager to track campaign execution."""
        start_time = time.time()
        status = "success"

        try:
            yield
        except Exception as e:
            status = "error"
            self.record_error(type(e).__name__, f"campaign.{campaign}")
            raise
        finally:
            if self.enabled:
                self.campaign_duration.labels(campaign=campaign, status=status).observe(time.time() - start_time)

    def counter_values(self) -> Dict[Tuple[str, Tuple[Tuple[str, str], ...]], float]:
        """Current value of every counter sample, keyed by sample name and sorted labels."""
        if not self.enabled:
            return {}
        values = {}
        for family in self.registry.collect():
            if family.type != "counter":
                continue
            for sample in family.samples:
                if sample.name.endswith("_total"):
                    values[(sample.name, tuple(sorted(sample.labels.items())))] = sample.value
        return values

    def counter_delta(self, before: Dict) -> Dict:
        """Counter increments since the `before` snapshot."""
        return {key: value - before.get(key, 0.0) for key, value in self.counter_values().items() if value != before.get(key, 0.0)}

    def add_counts(self, counts: Dict):
        """Add counter increments recorded elsewhere, such as in a worker process."""
        if not self.enabled:
            return
        counters = {
            "minima_lab_minima_computations_total": self.minima_computations,
            "minima_lab_enumeration_nodes_total": self.enumeration_nodes,
            "minima_lab_events_detected_total": self.events_detected,
            "minima_lab_checks_total": self.checks,
            "minima_lab_lemma_trials_total": self.lemma_trials,
            "minima_lab_errors_total": self.errors,
        }
        for (name, labels), value in counts.items():
            counter = counters.get(name)
            if counter is not None and value > 0:
                counter.labels(**dict(labels)).inc(value)

    def render(self) -> bytes:
        """Get current metrics in Prometheus text format."""
        if not self.enabled:
            return b""

        return generate_latest(self.registry)

    def write_textfile(self, path: str):
        """Write the current metrics to `path` in Prometheus text format."""
        if self.enabled:
            write_to_textfile(path, self.registry)


# Global metrics instance
_metrics: Optional[LabMetrics] = None


def get_metrics(enabled: Optional[bool] = None) -> LabMetrics:
    """Get or create global metrics instance."""
    global _metrics
    if _metrics is None:
        if enabled is None:
            from .config import get_observability_config
            enabled = get_observability_config().enable_metrics
        _metrics = LabMetrics(enabled)
    return _metrics


# Convenience instance
metrics = get_metrics()
