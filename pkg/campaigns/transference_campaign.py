"""
Transference Campaign.
Primal and dual traces on one u grid and the exchange ψ̄*_p = −n·ψ̂_(d+1−p).
"""
from typing import Any, Dict

from core.config import RunConfig
from tools.exponent_tool import check_transference, estimate_exponents, transference_band

from .problem import campaign, compute_trace, report_checks


@campaign("transference")
def run_transference(config: RunConfig) -> Dict[str, Any]:
    """
    Compare the dual estimates with −n times the reversed primal estimates.

    Both traces use the same u grid, so at each sample ψ*_p + n·ψ_(d+1−p) lies in
    [0, ln(d!)/ln u]. That band at the window start is reported next to the rows; the
    pass flag uses the configured tolerance alone.
    """
    d = config.d
    primal = compute_trace(config, mode="primal", p_max=d, find_events=False)
    dual = compute_trace(config, mode="dual", p_max=d, find_events=False)
    primal_est = estimate_exponents(primal, config.tail_fraction)
    dual_est = estimate_exponents(dual, config.tail_fraction)

    window_u = min(sample.u for sample in primal.window(config.tail_fraction))
    band = transference_band(d, window_u)
    report = check_transference(primal_est, dual_est, config.n, config.tolerance, band)
    return {
        **report_checks([report]),
        "primal": primal_est.as_dict(),
        "dual": dual_est.as_dict(),
    }
