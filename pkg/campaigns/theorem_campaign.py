"""
Theorem Campaign.
Finite-scale evaluation of the main inequalities for m = 1.
"""
from typing import Any, Dict

from core.config import RunConfig
from core.errors import IndependenceError
from core.numbers import IndependenceStatus, independence_dimension, independence_status
from core.observability import metrics
from tools.exponent_tool import check_dual_inequality, check_main_inequalities, estimate_exponents

from .problem import campaign, compute_trace, report_checks


def check_dimension(config: RunConfig) -> Dict[str, Any]:
    """
    dim_Q span(1, θ_1..θ_n) ≥ p for every p ≤ d.

    Raises:
        IndependenceError: an exactly represented Θ fails for some p.
    """
    entries = config.theta_spec().flat_entries()
    dimension = independence_dimension(entries)
    status = independence_status(entries)
    failing = [] if dimension is None else [p for p in range(1, config.d + 1) if dimension < p]
    metrics.record_check("eq:main_dim", not failing)
    if failing:
        raise IndependenceError(
            f"eq:main_dim fails for p = {', '.join(str(p) for p in failing)}: "
            f"dim span(1, theta) = {dimension}",
            failing,
        )
    return {"dimension": dimension, "independence": status.value}


@campaign("theorem")
def run_theorem(config: RunConfig) -> Dict[str, Any]:
    """
    Evaluate (1+ψ̄_p)(1/n − ψ̂_p) ≤ (1+ψ̄_1)(1/n − ψ̄_p) and its companion on the primal path,
    or the dual inequality with `mode = dual`, on tail-window estimates.

    Returns:
        Dictionary with the estimates, the check rows and the failing anchors.
    """
    # 1. Hypothesis
    hypothesis = check_dimension(config)

    # 2. Estimates with all d exponents
    trace = compute_trace(config, p_max=config.d)
    estimates = estimate_exponents(trace, config.tail_fraction)

    # 3. Inequalities
    if config.mode == "dual":
        report = check_dual_inequality(estimates, config.n, config.tolerance)
    else:
        report = check_main_inequalities(
            estimates, config.n, config.tolerance,
            IndependenceStatus(hypothesis["independence"]), hypothesis["dimension"],
        )
    return {**report_checks([report]), **hypothesis, "estimates": estimates.as_dict()}
