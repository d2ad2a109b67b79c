import json
import logging

from core.observability import logger
from main import run
from tools.lemma_tool import generate_instance
from tools.trace_io_tool import dump_instance

ZERO_TRACE = ["trace", "--theta", "rat:0", "--u-max", "16", "--samples", "4"]


def test_trace_csv_on_stdout(capsys):
    assert run(ZERO_TRACE) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "u,s,p,lambda,psi,event"
    assert lines[1].startswith("2.0,0.693147180559945,1,0.5,-1.0,")
    assert len(lines) == 9


def test_trace_is_deterministic(capsys):
    run(ZERO_TRACE + ["--p-max", "2"])
    first = capsys.readouterr().out
    run(ZERO_TRACE + ["--p-max", "2", "--workers", "2"])
    assert capsys.readouterr().out == first


def test_trace_to_output_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("MINIMA_LAB_OUTPUT_DIR", str(tmp_path))
    assert run(ZERO_TRACE + ["--out", "zero.csv", "--exact"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["csv"] == str(tmp_path / "zero.csv")
    assert (tmp_path / "zero.csv").read_text().startswith("u,s,p,lambda,psi,event,lambda_q,lambda_rho,lambda_k\n")


def test_events(capsys):
    code = run(["events", "--theta", "rat:22/7", "--u-min", "10", "--u-max", "1000", "--samples", "20"])
    assert code == 0
    result = json.loads(capsys.readouterr().out)
    assert result["count"] == 1
    assert result["events"][0]["witness"] == [7, 22]


def test_usage_errors_exit_2(capsys):
    assert run([]) == 2
    assert run(["trace", "--theta", "pi", "--u-max", "10"]) == 2
    assert run(["trace", "--theta", "rat:0", "--u-min", "1", "--u-max", "10"]) == 2
    assert run(["verify", "corollary", "--theta", "rat:0", "rat:1", "--m", "2"]) == 2
    assert "error:" in capsys.readouterr().err


def test_help_exits_0(capsys):
    assert run(["--help"]) == 0


def test_theorem_needs_independence(capsys):
    assert run(["verify", "theorem", "--theta", "rat:22/7", "--n", "1"]) == 2
    assert "eq:main_dim" in capsys.readouterr().err


def test_bounds_on_golden(capsys):
    code = run(["verify", "bounds", "--theta", "cf:[1;(1)]", "--u-max", "2000", "--samples", "40"])
    assert code == 0
    result = json.loads(capsys.readouterr().out)
    assert result["passed"] and result["failed_anchors"] == []


def test_corollary_on_golden(capsys):
    code = run([
        "verify", "corollary", "--theta", "cf:[1;(1)]", "--u-min", "3", "--u-max", "500",
        "--samples", "40", "--events", "5",
    ])
    assert code == 0
    result = json.loads(capsys.readouterr().out)
    assert result["events_checked"] == 5


def test_transference_on_zero_theta(capsys):
    code = run(["verify", "transference", "--theta", "rat:0", "--u-max", "100", "--samples", "10"])
    assert code == 0


def test_dual_bounds(capsys):
    code = run(["verify", "bounds", "--theta", "rat:0", "--u-max", "100", "--samples", "10", "--mode", "dual"])
    assert code == 0


def test_failed_check_exits_1(capsys):
    # θ ≈ 13/8 and θ ≈ 144/89 pick different witnesses at u = 1000
    code = run([
        "trace", "--theta", "cf:[1;(1)]", "--u-max", "1000", "--samples", "5",
        "--faithfulness", "1/100", "--confirm-stability",
    ])
    assert code == 1
    assert "FAILED: stability" in capsys.readouterr().err


def test_lemma_suite(capsys):
    assert run(["verify", "lemma", "--trials", "12", "--seed", "cli"]) == 0
    captured = capsys.readouterr()
    result = json.loads(captured.out)
    assert result["passed"] is True
    assert result["passed_trials"] == 12 and result["rejected"] == 0
    assert result["summary"] == "12/12 pass"
    assert "12/12 pass" in captured.err


def test_lemma_replay(tmp_path, capsys):
    path = dump_instance(generate_instance("cli-replay", 3), str(tmp_path))
    assert run(["verify", "lemma", "--replay", path]) == 0
    assert "1/1 pass" in capsys.readouterr().err


def test_config_file(tmp_path, capsys):
    conf = tmp_path / "zero.conf"
    conf.write_text("theta = rat:0\nu_max = 16\nsamples = 4\n")
    assert run(["trace", "--config", str(conf)]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 9


def test_metrics_textfile(tmp_path, capsys):
    target = tmp_path / "metrics.prom"
    assert run(ZERO_TRACE + ["--metrics-out", str(target)]) == 0
    text = target.read_text()
    assert "minima_lab_minima_computations_total" in text
    assert "minima_lab_campaign_duration_seconds" in text


def test_decimal_theta_warns_once(caplog, monkeypatch, capsys):
    monkeypatch.setattr(logger.logger, "propagate", True)
    with caplog.at_level(logging.WARNING):
        assert run(["trace", "--theta", "rat:0.5", "--u-max", "16", "--samples", "4"]) == 0
        assert run(["trace", "--theta", "rat:1/2", "--u-max", "16", "--samples", "4"]) == 0
    capsys.readouterr()
    warnings = [record.getMessage() for record in caplog.records if "degenerate" in record.getMessage()]
    assert len(warnings) == 1
    assert "0.5" in warnings[0]
