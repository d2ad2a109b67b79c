"""
Trace Campaign.
Computes a ψ trace along the primal or dual path and writes it as CSV.
"""
import sys
from typing import Any, Dict

from core.config import RunConfig
from core.errors import LabError
from core.observability import logger
from tools.exponent_tool import confirm_stability
from tools.trace_io_tool import output_path, write_trace_csv

from .problem import campaign, compute_trace


@campaign("trace")
def run_trace(config: RunConfig) -> Dict[str, Any]:
    """
    Compute the trace of λ_1..λ_p_max and ψ_p, events included, and emit CSV.

    Args:
        config: RunConfig with theta, mode, u range, samples and p_max (defaults to p).

    Returns:
        Dictionary with the CSV destination, row and event counts and, with
        confirm_stability, the witnesses that changed under a finer approximation.
    """
    p_max = config.p_max or config.p
    trace = compute_trace(config, p_max=p_max)

    # 1. Emit CSV, rows ordered by u
    destination = output_path(config.out)
    if destination in (None, "-"):
        rows = write_trace_csv(trace, sys.stdout, config.exact)
        destination = "-"
    else:
        try:
            with open(destination, "w", encoding="utf-8", newline="") as handle:
                rows = write_trace_csv(trace, handle, config.exact)
        except OSError as e:
            raise LabError(f"cannot write {destination}: {e}") from e

    result: Dict[str, Any] = {
        "passed": True,
        "csv": destination,
        "rows": rows,
        "samples": len(trace.samples),
        "events": len(trace.events),
    }

    # 2. Optionally recompute witnesses at squared faithfulness
    if config.confirm_stability:
        stability = confirm_stability(
            trace, config.theta_spec(), config.path(), config.resolved_faithfulness(),
            config.method, config.budget, config.workers,
        )
        result["stability_checked"] = stability.checked
        result["stability_disagreements"] = [u.to_decimal(12) for u in stability.disagreements]
        if not stability.passed:
            logger.log_check_result("stability", False, disagreements=len(stability.disagreements))
            result["passed"] = False
            result["failed_anchors"] = ["stability"]
    return result
