"""
Bounds Campaign.
"""
from typing import Any, Dict

from core.config import RunConfig
from tools.exponent_tool import check_bounds, estimate_exponents

from .problem import campaign, compute_trace, report_checks


@campaign("bounds")
def run_bounds(config: RunConfig) -> Dict[str, Any]:
    """Check −1 ≤ ψ̄_p ≤ ψ̂_p ≤ m/n (n/m on the dual path) within the configured tolerance."""
    trace = compute_trace(config, find_events=False)
    estimates = estimate_exponents(trace, config.tail_fraction)
    return {**report_checks([check_bounds(estimates, config.tolerance)]), "estimates": estimates.as_dict()}
