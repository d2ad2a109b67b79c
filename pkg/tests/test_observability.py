import json
import logging

import pytest
from prometheus_client.parser import text_string_to_metric_families

from core import workers
from core.errors import HypothesisViolation, IndependenceError, InputError, LabError, LemmaViolation
from core.observability import LabMetrics, LabTracer, ObservabilityConfig, StructuredLogger


def sample_value(text: str, name: str, **labels):
    for family in text_string_to_metric_families(text):
        for sample in family.samples:
            if sample.name == name and sample.labels == labels:
                return sample.value
    return None


def test_config_from_env(monkeypatch):
    monkeypatch.setenv("LOG_LEVEL", "debug")
    monkeypatch.setenv("ENABLE_METRICS", "false")
    monkeypatch.setenv("METRICS_TEXTFILE", "/tmp/m.prom")
    config = ObservabilityConfig.from_env()
    assert config.log_level == "DEBUG"
    assert not config.enable_metrics
    assert config.metrics_textfile == "/tmp/m.prom"


def test_json_log_lines(capsys):
    log = StructuredLogger("minima_lab_test_json", "INFO", "json")
    log.log_check_result("eq:core", False, u0="2.5")
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["severity"] == "ERROR"
    assert record["anchor"] == "eq:core" and record["passed"] is False


def test_text_format_and_level(caplog):
    log = StructuredLogger("minima_lab_test_text", "WARNING", "text")
    log.logger.propagate = True
    with caplog.at_level(logging.DEBUG):
        log.info("hidden")
        log.warning("Skipping event", u0="1.5")
    messages = [record.getMessage() for record in caplog.records]
    assert messages == ["WARNING Skipping event u0=1.5"]


def test_metrics_render():
    metrics = LabMetrics(enabled=True)
    metrics.record_check("eq:main_1", True)
    metrics.record_check("eq:main_1", False)
    metrics.record_lemma_trial("pass")
    with pytest.raises(RuntimeError):
        with metrics.track_campaign("trace"):
            raise RuntimeError("boom")
    text = metrics.render().decode()
    assert sample_value(text, "minima_lab_checks_total", anchor="eq:main_1", status="fail") == 1.0
    assert sample_value(text, "minima_lab_lemma_trials_total", outcome="pass") == 1.0
    assert sample_value(text, "minima_lab_errors_total", error_type="RuntimeError", component="campaign.trace") == 1.0


def record_in_worker(anchor: str) -> str:
    workers.metrics.record_check(anchor, True)
    return anchor


def test_counter_delta_and_merge():
    source = LabMetrics(enabled=True)
    source.record_check("eq:core", True)
    before = source.counter_values()
    source.record_check("eq:core", True)
    source.record_event("primal")
    delta = source.counter_delta(before)
    assert delta == {
        ("minima_lab_checks_total", (("anchor", "eq:core"), ("status", "pass"))): 1.0,
        ("minima_lab_events_detected_total", (("mode", "primal"),)): 1.0,
    }
    target = LabMetrics(enabled=True)
    target.add_counts(delta)
    text = target.render().decode()
    assert sample_value(text, "minima_lab_checks_total", anchor="eq:core", status="pass") == 1.0
    assert sample_value(text, "minima_lab_events_detected_total", mode="primal") == 1.0


def test_worker_counts_reach_the_parent(monkeypatch):
    if not workers.metrics.enabled:
        pytest.skip("metrics disabled in this environment")
    parent = LabMetrics(enabled=True)
    monkeypatch.setattr(workers, "metrics", parent)
    anchors = ["eq:core", "eq:main_1", "eq:core"]
    assert workers.map_ordered(record_in_worker, anchors, workers=2) == anchors
    text = parent.render().decode()
    assert sample_value(text, "minima_lab_checks_total", anchor="eq:core", status="pass") == 2.0
    assert sample_value(text, "minima_lab_checks_total", anchor="eq:main_1", status="pass") == 1.0


def test_disabled_metrics_and_tracer():
    metrics = LabMetrics(enabled=False)
    metrics.record_check("eq:core", True)
    assert metrics.render() == b""
    tracer = LabTracer(enabled=False)

    @tracer.trace_operation("noop")
    def double(x):
        return 2 * x

    assert double(4) == 8
    tracer.flush()


def test_exit_codes():
    assert LabError("x").exit_code == 1
    assert InputError("x").exit_code == 2
    assert IndependenceError("x", [2]).exit_code == 2
    assert IndependenceError("x", [2]).failing_p == [2]
    assert HypothesisViolation("x").exit_code == 1
    assert LemmaViolation("x", replay_path="r.txt").replay_path == "r.txt"
    assert isinstance(InputError("x"), ValueError)


def test_config_falls_back_on_unknown_values(monkeypatch):
    monkeypatch.setenv("LOG_LEVEL", "chatty")
    monkeypatch.setenv("LOG_FORMAT", "xml")
    monkeypatch.setenv("ENABLE_TRACING", "yes")
    config = ObservabilityConfig.from_env()
    assert config.log_level == "INFO" and config.log_format == "json"
    assert config.enable_tracing
