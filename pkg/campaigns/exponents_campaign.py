"""
Exponents Campaign.
Tail-window estimates of ψ̄_p, ψ̂_p and the derived β_p, α_p, with finite-scale diagnostics.
"""
from typing import Any, Dict

import mpmath

from core.config import RunConfig
from tools.exponent_tool import (
    beta_alpha_direct,
    beta_alpha_from_psi,
    confirm_stability,
    divergence_trend,
    estimate_exponents,
    liminf_consistency,
    minkowski_band,
    t_grid,
)

from .problem import campaign, compute_trace


def _nstr(value) -> Any:
    return None if value is None else mpmath.nstr(value, 12)


@campaign("exponents")
def run_exponents(config: RunConfig) -> Dict[str, Any]:
    """
    Estimate the exponents of one problem.

    Args:
        config: RunConfig; p_max defaults to d, t_max to u_max for the direct estimator.

    Returns:
        Dictionary with the estimates, β/α derived from ψ, the direct β/α (m = 1 primal),
        divergence tail maxima, the event-restricted liminf comparison and the Minkowski band.
    """
    trace = compute_trace(config)
    estimates = estimate_exponents(trace, config.tail_fraction)
    result: Dict[str, Any] = {"passed": True, "estimates": estimates.as_dict(), "failed_anchors": []}

    # 1. β and α through the ψ exponents
    result["beta_alpha_from_psi"] = [
        {"p": ba.p, "beta": _nstr(ba.beta), "alpha": _nstr(ba.alpha)}
        for ba in beta_alpha_from_psi(estimates, config.m, config.n)
    ]

    # 2. Direct β and α from |x| ≤ t, |θx − y| ≤ t^(−γ)
    if config.m == 1 and config.mode == "primal":
        t_max = config.t_max or config.u_max
        direct = [
            beta_alpha_direct(
                config.theta_spec(), p, t_grid(config.u_min, t_max, config.t_samples), config.tail_fraction,
                method=config.method, budget=config.budget, workers=config.workers,
            )
            for p in range(1, trace.p_max + 1)
        ]
        result["beta_alpha_direct"] = [
            {"p": est.p, "beta": _nstr(est.beta), "alpha": _nstr(est.alpha), "window_start": str(est.window_start)}
            for est in direct
        ]

    # 3. Finite-scale properties of the trace
    trend = divergence_trend(trace, config.n, config.mode, config.tail_fraction)
    result["divergence_tail_max"] = {name: _nstr(value) for name, value in trend.tail_max.items()}
    liminf = liminf_consistency(trace, config.tail_fraction, config.tolerance)
    result["liminf_consistency"] = {
        "event_min": _nstr(liminf.event_min),
        "overall_min": _nstr(liminf.overall_min),
        "events_in_window": liminf.events_in_window,
        "passed": liminf.passed,
    }
    if trace.p_max == config.d:
        band = minkowski_band(trace, config.d)
        result["minkowski_band"] = {"checked": band.checked, "failures": [u.to_decimal(12) for u in band.failures]}
        if not band.passed:
            result["passed"] = False
            result["failed_anchors"].append("minkowski")

    if config.confirm_stability:
        stability = confirm_stability(
            trace, config.theta_spec(), config.path(), config.resolved_faithfulness(),
            config.method, config.budget, config.workers,
        )
        result["stability_disagreements"] = [u.to_decimal(12) for u in stability.disagreements]
        if not stability.passed:
            result["passed"] = False
            result["failed_anchors"].append("stability")
    return result
