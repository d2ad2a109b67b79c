"""
Shared campaign plumbing: building the lattice and path of a RunConfig, computing traces
and reporting checks.
"""
import functools
import time
from typing import Any, Callable, Dict, Iterable, List, Optional

from core.config import RunConfig
from core.lattice import Lattice, dual_lattice, primal_lattice
from core.numbers import RationalValue
from core.observability import logger, metrics, tracer
from tools.exponent_tool import CheckReport, Trace, psi_trace


def campaign(name: str) -> Callable:
    """Wrap a `run_<campaign>(config)` function with tracing, metrics and start/complete logs."""
    def decorator(func: Callable[[RunConfig], Dict[str, Any]]) -> Callable[[RunConfig], Dict[str, Any]]:
        @functools.wraps(func)
        @tracer.trace_campaign(name)
        def wrapper(config: RunConfig) -> Dict[str, Any]:
            logger.log_campaign_start(name, {"theta": config.theta, "mode": config.mode, "seed": config.seed})
            warn_rational_literals(config)
            start_time = time.time()
            with metrics.track_campaign(name):
                result = func(config)
            logger.log_campaign_complete(name, (time.time() - start_time) * 1000, result)
            return result
        return wrapper
    return decorator


def warn_rational_literals(config: RunConfig):
    """Warn for every θ entry given as a literal: it is rational, so its exponents are degenerate."""
    if not config.theta:
        return
    for row in config.theta_spec().entries:
        for entry in row:
            if isinstance(entry, RationalValue) and entry.literal:
                logger.warning("θ literal is rational; its exponents are degenerate", literal=entry.literal, value=str(entry.value))


def build_lattice(config: RunConfig, mode: Optional[str] = None) -> Lattice:
    build = dual_lattice if (mode or config.mode) == "dual" else primal_lattice
    return build(config.theta_spec(), config.resolved_faithfulness())


def build_problem(config: RunConfig, mode: Optional[str] = None):
    """(lattice, path) for the requested mode."""
    return build_lattice(config, mode), config.path(mode)


def compute_trace(
    config: RunConfig, mode: Optional[str] = None, p_max: Optional[int] = None, find_events: bool = True
) -> Trace:
    lattice, path = build_problem(config, mode)
    return psi_trace(
        lattice,
        path,
        config.u_min,
        config.u_max,
        config.samples,
        p_max or config.resolved_p_max(),
        method=config.method,
        budget=config.budget,
        workers=config.workers,
        find_events=find_events,
        m=config.m,
        faithfulness=config.resolved_faithfulness(),
    )


def report_checks(reports: Iterable[CheckReport]) -> Dict[str, Any]:
    """Log every failing row under its anchor and summarize the reports."""
    reports = list(reports)
    failed: List[str] = []
    for report in reports:
        for row in report.failures:
            logger.log_check_result(row.anchor, False, p=row.p, lhs=str(row.lhs), rhs=str(row.rhs))
            if row.anchor not in failed:
                failed.append(row.anchor)
    return {
        "passed": not failed,
        "failed_anchors": failed,
        "checks": [report.as_dict() for report in reports],
    }