"""
Command-line front end for the minima lab.

Exit codes: 0 when the command succeeds and every check passes, 1 when a check fails or
a computation gives up, 2 on usage or input errors.
"""
import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

load_dotenv()

from campaigns import CAMPAIGNS  # noqa: E402
from core.config import build_config, load_config_file  # noqa: E402
from core.errors import LabError  # noqa: E402
from core.observability import get_observability_config, logger, metrics, tracer  # noqa: E402

PROBLEM_COMMANDS = ("corollary", "theorem", "transference", "bounds")


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="key = value file with the same keys as the long flags")
    parser.add_argument("--workers", type=int, help="worker processes (default 1)")
    parser.add_argument("--method", choices=("auto", "scan", "reduced"))
    parser.add_argument("--budget", help="enumeration node cap, 0 for none")
    parser.add_argument("--out", help="output path, relative to MINIMA_LAB_OUTPUT_DIR when set")
    parser.add_argument("--metrics-out", help="write Prometheus text metrics here at exit")


def _add_problem(parser: argparse.ArgumentParser):
    parser.add_argument("--theta", nargs="+", help="θ entries: rat:p/q, cf:[a0;a1,...,(period)], liouville:b")
    parser.add_argument("--mode", choices=("primal", "dual"))
    parser.add_argument("--m", type=int)
    parser.add_argument("--n", type=int)
    parser.add_argument("--u-min")
    parser.add_argument("--u-max")
    parser.add_argument("--s-max", type=float)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--p", type=int)
    parser.add_argument("--p-max", type=int)
    parser.add_argument("--faithfulness", help="θ approximation error, e.g. 1e-30")
    parser.add_argument("--tolerance", type=float)
    parser.add_argument("--tail-fraction", type=float)
    parser.add_argument("--exact", action="store_true", default=None, help="add exact λ columns to CSV")
    parser.add_argument("--confirm-stability", action="store_true", default=None)


def _add_lemma(parser: argparse.ArgumentParser):
    parser.add_argument("--trials", type=int)
    parser.add_argument("--dim", type=int)
    parser.add_argument("--seed")
    parser.add_argument("--entry-bound", type=int)
    parser.add_argument("--denominator-bound", type=int)
    parser.add_argument("--replay", help="check one saved instance instead of random trials")
    parser.add_argument("--replay-dir", help="where violating instances are written")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minima-lab", description=__doc__.strip().splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("trace", "ψ trace as CSV"),
        ("events", "front-facet events on a u grid"),
        ("exponents", "tail-window exponent estimates"),
    ):
        sub = commands.add_parser(name, help=help_text)
        _add_problem(sub)
        _add_common(sub)
        if name == "exponents":
            sub.add_argument("--t-max")
            sub.add_argument("--t-samples", type=int)

    verify = commands.add_parser("verify", help="verification campaigns").add_subparsers(dest="check", required=True)
    lemma = verify.add_parser("lemma", help="randomized front-facet lemma suite")
    _add_lemma(lemma)
    _add_common(lemma)
    for name in PROBLEM_COMMANDS:
        sub = verify.add_parser(name)
        _add_problem(sub)
        _add_common(sub)
        if name == "corollary":
            sub.add_argument("--events", type=int, help="number of events to verify")
    return parser


def _flags(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"command", "check", "config"}
    return {key: value for key, value in vars(args).items() if key not in skip}


def _print_result(result: Dict[str, Any]):
    if result.get("csv") == "-":
        return
    print(json.dumps(result, indent=2, default=str))


def run(argv: Optional[List[str]] = None) -> int:
    """Parse `argv`, run one campaign and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    command = args.check if args.command == "verify" else args.command
    metrics_out = args.metrics_out or get_observability_config().metrics_textfile
    try:
        file_values = load_config_file(args.config) if args.config else {}
        config = build_config(command, file_values, **_flags(args))
        metrics_out = config.metrics_out or metrics_out
        result = CAMPAIGNS[command](config)
    except LabError as e:
        logger.log_error_with_context(e, {"command": command, **e.context})
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    finally:
        if metrics_out:
            metrics.write_textfile(metrics_out)
        tracer.flush()

    _print_result(result)
    if not result.get("passed", True):
        print(f"FAILED: {', '.join(result.get('failed_anchors') or [command])}", file=sys.stderr)
        return 1
    if "summary" in result:
        print(result["summary"], file=sys.stderr)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
