"""
Exponent Tool.
ψ_p traces along a path, tail-window exponent estimates and the finite-scale checks built on them.

Estimates are tail-window minima and maxima over [tail_fraction·s_max, s_max]; every
report carries that window so no finite number is presented as a limit.
"""
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import partial
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath

from core.errors import EmptyWindowError, InputError, NoFrontFacetReachable
from core.lattice import (
    Box, Lattice, PathSpec, ThetaSpec, box_at, dual_lattice, geometric_grid, primal_lattice, required_faithfulness,
)
from core.linalg import rank
from core.minima import DEFAULT_BUDGET, LatticePoint, MinimaResult, enumerate_in_box, successive_minima
from core.numbers import IndependenceStatus
from core.observability import logger, metrics, tracer
from core.scale import ScaleValue
from core.workers import map_ordered
from tools.event_tool import Event, dedupe_events, path_mode, shrink_to_event

DPS = 30
INFINITY = mpmath.inf


# Traces

@dataclass(frozen=True)
class TraceSample:
    u: ScaleValue
    s: Any
    lambdas: Tuple[ScaleValue, ...]
    psis: Tuple[Any, ...]
    event: bool = False
    witnesses: Tuple[LatticePoint, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class Trace:
    """Samples of λ_p and ψ_p = ln λ_p / s, sorted by u."""
    label: str
    mode: str
    m: int
    n: int
    p_max: int
    u_min: Fraction
    u_max: Fraction
    samples: Tuple[TraceSample, ...]
    events: Tuple[Event, ...] = field(default=(), compare=False)
    faithfulness: Optional[Fraction] = field(default=None, compare=False)

    @property
    def s_max(self):
        return max(sample.s for sample in self.samples)

    def window_start(self, tail_fraction: float):
        """tail_fraction·s_max at the precision the samples were stored with."""
        if not 0 < tail_fraction <= 1:
            raise InputError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
        if not self.samples:
            raise EmptyWindowError("the trace has no samples")
        with mpmath.workdps(DPS):
            return self.s_max * mpmath.mpf(tail_fraction)

    def window(self, tail_fraction: float) -> List[TraceSample]:
        """Samples with s in [tail_fraction·s_max, s_max]."""
        start = self.window_start(tail_fraction)
        return [sample for sample in self.samples if sample.s >= start]


def _make_sample(path: PathSpec, u: ScaleValue, minima: MinimaResult, event: bool) -> TraceSample:
    with mpmath.workdps(DPS):
        s = path.s_at(u)
        psis = tuple(lam.ln() / s for lam in minima.lambdas)
    return TraceSample(u, s, minima.lambdas, psis, event, minima.witnesses)


def _grid_sample(
    lattice: Lattice, path: PathSpec, p_max: int, method: str, budget: Optional[int], find_events: bool, u: Fraction
) -> Tuple[TraceSample, Optional[Event]]:
    u = ScaleValue.of(u)
    minima = successive_minima(lattice, box_at(path, u), p_max, method, budget)
    event = None
    if find_events:
        try:
            event = shrink_to_event(lattice, path, u, method, budget, lambda1=minima.lambda_1)
        except NoFrontFacetReachable as e:
            logger.debug("Grid point has no front-facet event", u=str(u), reason=str(e))
    return _make_sample(path, u, minima, event is not None and event.u == u), event


def _event_sample(lattice: Lattice, path: PathSpec, p_max: int, method: str, budget: Optional[int], u: ScaleValue) -> TraceSample:
    minima = successive_minima(lattice, box_at(path, u), p_max, method, budget)
    return _make_sample(path, u, minima, True)


def _supports_events(path: PathSpec) -> bool:
    return len(set(path.weights[1:])) == 1


@tracer.trace_operation("psi_trace")
def psi_trace(
    lattice: Lattice,
    path: PathSpec,
    u_min: Fraction,
    u_max: Fraction,
    samples: int,
    p_max: int,
    method: str = "auto",
    budget: Optional[int] = DEFAULT_BUDGET,
    workers: int = 1,
    find_events: bool = True,
    m: int = 1,
    faithfulness: Optional[Fraction] = None,
) -> Trace:
    """
    Build a ψ trace on a geometric u grid merged with the front-facet events in range.

    Args:
        lattice: Lattice of the problem.
        path: Path of the box flow.
        u_min: Lower end of the grid, > 1.
        u_max: Upper end of the grid.
        samples: Grid points.
        p_max: Number of minima per sample, at most d.
        workers: Worker processes; output order is by u regardless.
        find_events: Shrink at every grid point and add the events to the trace.
        m: Number of columns of Θ, for the reported exponent bounds.

    Returns:
        Trace with exact λ values and decimal ψ values.
    """
    d = lattice.dimension
    if path.dimension != d:
        raise InputError(f"path dimension {path.dimension} does not match lattice dimension {d}")
    if not 1 <= p_max <= d:
        raise InputError(f"p_max must lie in [1, {d}], got {p_max}")
    find_events = find_events and _supports_events(path)

    grid = geometric_grid(Fraction(u_min), Fraction(u_max), samples)
    results = map_ordered(
        partial(_grid_sample, lattice, path, p_max, method, budget, find_events), grid, workers
    )
    by_u: Dict[ScaleValue, TraceSample] = {sample.u: sample for sample, _ in results}
    events = [
        event for event in dedupe_events([event for _, event in results])
        if u_min <= event.u <= u_max
    ]
    fresh = [event.u for event in events if event.u not in by_u]
    for sample in map_ordered(partial(_event_sample, lattice, path, p_max, method, budget), fresh, workers):
        by_u[sample.u] = sample
    for event in events:
        if not by_u[event.u].event:
            by_u[event.u] = replace(by_u[event.u], event=True)
        metrics.record_event(path_mode(path))

    ordered = tuple(by_u[u] for u in sorted(by_u))
    logger.info(
        "Trace computed",
        lattice=lattice.label,
        grid_points=len(grid),
        events=len(events),
        samples=len(ordered),
        p_max=p_max,
    )
    return Trace(
        lattice.label, path_mode(path) if _supports_events(path) else path.label,
        m, d - m, p_max, Fraction(u_min), Fraction(u_max), ordered, tuple(events), faithfulness,
    )


# Exponent estimates

@dataclass(frozen=True)
class ExponentEstimates:
    """Tail-window estimates ψ̄_p ≈ min ψ_p and ψ̂_p ≈ max ψ_p, p = 1..p_max."""
    mode: str
    m: int
    n: int
    lower: Tuple[Any, ...]
    upper: Tuple[Any, ...]
    event_lower_1: Any = None
    s_max: Any = None
    window_start: Any = None
    tail_fraction: float = 0.5
    samples_in_window: int = 0
    events_in_window: int = 0

    @classmethod
    def from_values(cls, lower: Sequence, upper: Sequence, m: int = 1, n: int = 1, mode: str = "primal") -> "ExponentEstimates":
        """Estimates given directly, e.g. analytically known values or controls."""
        if len(lower) != len(upper):
            raise InputError("lower and upper estimates must have the same length")
        return cls(mode, m, n, tuple(mpmath.mpf(x) for x in lower), tuple(mpmath.mpf(x) for x in upper))

    @property
    def p_max(self) -> int:
        return len(self.lower)

    @property
    def d(self) -> int:
        return self.m + self.n

    def as_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "lower": [mpmath.nstr(x, 12) for x in self.lower],
            "upper": [mpmath.nstr(x, 12) for x in self.upper],
            "event_lower_1": None if self.event_lower_1 is None else mpmath.nstr(self.event_lower_1, 12),
            "window": None if self.s_max is None else [mpmath.nstr(self.window_start, 12), mpmath.nstr(self.s_max, 12)],
            "samples_in_window": self.samples_in_window,
            "events_in_window": self.events_in_window,
            "caveat": "finite-range tail estimates, not limits",
        }


def estimate_exponents(trace: Trace, tail_fraction: float = 0.5) -> ExponentEstimates:
    """
    Tail-window estimates of the lower and upper exponents of a trace.

    ψ̄_1 is additionally estimated over the event samples of the window only.

    Raises:
        EmptyWindowError: the window holds no samples.
    """
    window = trace.window(tail_fraction)
    if not window:
        raise EmptyWindowError(f"no samples in the tail window of fraction {tail_fraction}")
    lower = tuple(min(sample.psis[p] for sample in window) for p in range(trace.p_max))
    upper = tuple(max(sample.psis[p] for sample in window) for p in range(trace.p_max))
    event_samples = [sample for sample in window if sample.event]
    event_lower_1 = min(sample.psis[0] for sample in event_samples) if event_samples else None
    s_max = trace.s_max
    return ExponentEstimates(
        trace.mode, trace.m, trace.n, lower, upper, event_lower_1,
        s_max, trace.window_start(tail_fraction), tail_fraction, len(window), len(event_samples),
    )


@dataclass(frozen=True)
class BetaAlpha:
    p: int
    beta: Any
    alpha: Any


def _from_psi(d: int, n: int, psi) -> Any:
    if 1 + psi <= 0:
        return INFINITY
    return mpmath.mpf(d) / (n * (1 + psi)) - 1


def beta_alpha_from_psi(est: ExponentEstimates, m: int, n: int) -> List[BetaAlpha]:
    """β_p = d/(n(1+ψ̄_p)) − 1 and α_p = d/(n(1+ψ̂_p)) − 1; ψ = −1 gives an infinite exponent."""
    d = m + n
    with mpmath.workdps(DPS):
        return [
            BetaAlpha(p + 1, _from_psi(d, n, est.lower[p]), _from_psi(d, n, est.upper[p]))
            for p in range(est.p_max)
        ]


# Direct Diophantine exponents

@dataclass(frozen=True)
class DirectEstimates:
    """γ(t) = −ln E_p(t) / ln t with E_p(t) the p-th least sup-error of |x| ≤ t solutions."""
    p: int
    t_values: Tuple[Fraction, ...]
    errors: Tuple[Fraction, ...]
    gammas: Tuple[Any, ...]
    beta: Any
    alpha: Any
    window_start: Fraction


def _error_at(lattice: Lattice, n: int, p: int, method: str, budget: Optional[int], t: Fraction) -> Fraction:
    """E_p(t): the least ε with p independent solutions of |x| ≤ t, |θx − y| ≤ ε."""
    eps = ScaleValue(1 / Fraction(t)).root(n).upper_bound()
    while True:
        box = Box.from_rationals([t] + [eps] * n)
        ranked = sorted(
            enumerate_in_box(lattice, box, 1, budget, method),
            key=lambda point: (max(abs(z) for z in point.coordinates[1:]), point.coefficients),
        )
        picked: List[LatticePoint] = []
        for point in ranked:
            candidate = picked + [point]
            if _independent([pt.coefficients for pt in candidate]):
                picked = candidate
                if len(picked) == p:
                    return max(abs(z) for z in point.coordinates[1:])
        eps *= 2


def _independent(vectors: Sequence[Sequence[int]]) -> bool:
    return rank(vectors) == len(vectors)


def _gamma(error: Fraction, t: Fraction):
    if error == 0:
        return INFINITY
    return -ScaleValue(error).ln() / ScaleValue(t).ln()


@tracer.trace_operation("beta_alpha_direct")
def beta_alpha_direct(
    theta: ThetaSpec,
    p: int,
    t_grid: Sequence[Fraction],
    tail_fraction: float = 0.5,
    faithfulness: Optional[Fraction] = None,
    method: str = "auto",
    budget: Optional[int] = DEFAULT_BUDGET,
    workers: int = 1,
) -> DirectEstimates:
    """
    Direct estimates of β_p and α_p from |x| ≤ t, |Θx − y| ≤ t^(−γ).

    β_p is the largest and α_p the least γ(t) over the tail window ln t ≥ tail_fraction·ln t_max.
    An exact solution with zero error gives γ = ∞.
    """
    if theta.m != 1:
        raise InputError("direct exponents need m = 1")
    if not 1 <= p <= theta.d:
        raise InputError(f"p must lie in [1, {theta.d}], got {p}")
    t_values = tuple(Fraction(t) for t in t_grid)
    if not t_values or any(t <= 1 for t in t_values) or list(t_values) != sorted(set(t_values)):
        raise InputError("t_grid must be a nonempty increasing sequence of values > 1")
    if not 0 < tail_fraction <= 1:
        raise InputError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")

    if faithfulness is None:
        faithfulness = required_faithfulness(t_values[-1], theta.d)
    lattice = primal_lattice(theta, faithfulness)
    errors = tuple(map_ordered(partial(_error_at, lattice, theta.n, p, method, budget), t_values, workers))

    with mpmath.workdps(DPS):
        gammas = tuple(_gamma(error, t) for error, t in zip(errors, t_values))
        log_max = ScaleValue(t_values[-1]).ln()
        tail = [g for g, t in zip(gammas, t_values) if ScaleValue(t).ln() >= tail_fraction * log_max]
        window_start = next(t for t in t_values if ScaleValue(t).ln() >= tail_fraction * log_max)
    return DirectEstimates(p, t_values, errors, gammas, max(tail), min(tail), window_start)


def t_grid(t_min: Fraction, t_max: Fraction, count: int) -> List[Fraction]:
    """Geometric t grid for the direct estimator."""
    return geometric_grid(Fraction(t_min), Fraction(t_max), count)


# Checks

@dataclass(frozen=True)
class CheckRow:
    """One evaluated inequality `lhs ≤ rhs` (within tolerance) for index p."""
    anchor: str
    p: int
    lhs: Any
    rhs: Any
    passed: bool

    @property
    def slack(self):
        return self.rhs - self.lhs

    def as_dict(self) -> Dict[str, Any]:
        return {
            "anchor": self.anchor,
            "p": self.p,
            "lhs": mpmath.nstr(self.lhs, 12),
            "rhs": mpmath.nstr(self.rhs, 12),
            "slack": mpmath.nstr(self.slack, 12),
            "passed": self.passed,
        }


@dataclass(frozen=True)
class CheckReport:
    name: str
    rows: Tuple[CheckRow, ...]
    tolerance: float
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def failures(self) -> List[CheckRow]:
        return [row for row in self.rows if not row.passed]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "check": self.name,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "rows": [row.as_dict() for row in self.rows],
            **self.notes,
        }


def _row(anchor: str, p: int, lhs, rhs, tolerance: float) -> CheckRow:
    passed = bool(lhs <= rhs + tolerance)
    metrics.record_check(anchor, passed)
    return CheckRow(anchor, p, lhs, rhs, passed)


def upper_exponent_limit(est: ExponentEstimates) -> Fraction:
    """m/n on the primal path, n/m on the dual path."""
    if est.mode == "dual":
        return Fraction(est.n, est.m)
    return Fraction(est.m, est.n)


def check_bounds(est: ExponentEstimates, tolerance: float = 0.02) -> CheckReport:
    """−1 ≤ ψ̄_p ≤ ψ̂_p ≤ m/n (n/m on the dual path), each within `tolerance`."""
    limit = upper_exponent_limit(est)
    top = mpmath.mpf(limit.numerator) / limit.denominator
    rows = []
    for p in range(est.p_max):
        rows.append(_row("prop:bounds", p + 1, mpmath.mpf(-1), est.lower[p], tolerance))
        rows.append(_row("prop:bounds", p + 1, est.lower[p], est.upper[p], tolerance))
        rows.append(_row("prop:bounds", p + 1, est.upper[p], top, tolerance))
    return CheckReport("bounds", tuple(rows), tolerance, {"upper_limit": str(limit)})


def check_main_inequalities(
    est: ExponentEstimates,
    n: int,
    tolerance: float = 0.05,
    independence: IndependenceStatus = IndependenceStatus.ASSUMED,
    dimension: Optional[int] = None,
) -> CheckReport:
    """
    (1+ψ̄_p)(1/n − ψ̂_p) ≤ (1+ψ̄_1)(1/n − ψ̄_p) and (1+ψ̂_d)(1/n − ψ̂_p) ≤ (1+ψ̂_p)(1/n − ψ̄_p).

    The second inequality needs estimates for every p up to d and is skipped otherwise.
    """
    inv_n = mpmath.mpf(1) / n
    d = n + 1
    lower, upper = est.lower, est.upper
    rows = []
    for p in range(est.p_max):
        rows.append(_row(
            "eq:main_1", p + 1,
            (1 + lower[p]) * (inv_n - upper[p]),
            (1 + lower[0]) * (inv_n - lower[p]),
            tolerance,
        ))
    if est.p_max == d:
        for p in range(d):
            rows.append(_row(
                "eq:main_2", p + 1,
                (1 + upper[d - 1]) * (inv_n - upper[p]),
                (1 + upper[p]) * (inv_n - lower[p]),
                tolerance,
            ))
    notes = {
        "independence": independence.value,
        "dimension": dimension,
        "main_2_evaluated": est.p_max == d,
    }
    return CheckReport("main", tuple(rows), tolerance, notes)


def check_dual_inequality(dual_est: ExponentEstimates, n: int, tolerance: float = 0.05) -> CheckReport:
    """(1+ψ̄*_p)(n − ψ̄*_1) ≤ (1+ψ̂*_p)(n − ψ̄*_p) on the dual path."""
    lower, upper = dual_est.lower, dual_est.upper
    rows = [
        _row("eq:dual_main_2", p + 1, (1 + lower[p]) * (n - lower[0]), (1 + upper[p]) * (n - lower[p]), tolerance)
        for p in range(dual_est.p_max)
    ]
    return CheckReport("dual", tuple(rows), tolerance)


def transference_band(d: int, u) -> Any:
    """ln(d!)/ln u: at a common u, ψ*_p + n·ψ_(d+1−p) lies in [0, ln(d!)/ln u]."""
    return mpmath.log(math.factorial(d)) / ScaleValue.of(u).ln()


def check_transference(
    primal_est: ExponentEstimates,
    dual_est: ExponentEstimates,
    n: int,
    tolerance: float = 0.1,
    band: Any = None,
) -> CheckReport:
    """
    ψ̄*_p = −n·ψ̂_(d+1−p) and ψ̂*_p = −n·ψ̄_(d+1−p), each within `tolerance`.

    `band` (transference_band at the window start) is reported next to the rows, with
    whether every deviation also fits inside tolerance + band; it never loosens a row.
    """
    d = n + 1
    if primal_est.p_max != d or dual_est.p_max != d:
        raise InputError(f"transference needs all {d} exponents of both problems")
    rows = []
    for p in range(d):
        q = d - 1 - p
        rows.append(_row("prop:transference", p + 1, abs(dual_est.lower[p] + n * primal_est.upper[q]), 0, tolerance))
        rows.append(_row("prop:transference", p + 1, abs(dual_est.upper[p] + n * primal_est.lower[q]), 0, tolerance))
    notes: Dict[str, Any] = {"largest_deviation": mpmath.nstr(max(row.lhs for row in rows), 12)}
    if band is not None:
        notes["band"] = mpmath.nstr(band, 12)
        notes["within_band"] = all(row.lhs <= tolerance + band for row in rows)
    return CheckReport("transference", tuple(rows), tolerance, notes)


# Finite-scale properties of traces

@dataclass(frozen=True)
class DivergenceTrend:
    """s-forms that tend to +∞ for independent θ, with their tail maxima."""
    series: Dict[str, Tuple[Tuple[Any, Any], ...]]
    tail_max: Dict[str, Any]


def divergence_trend(trace: Trace, n: int, mode: Optional[str] = None, tail_fraction: float = 0.5) -> DivergenceTrend:
    """s(1+ψ_p) and s(1/n − ψ_p) on the primal path, s(n − ψ_p) and s(1+ψ_p) on the dual path."""
    mode = mode or trace.mode
    window_start = trace.window_start(tail_fraction)
    series: Dict[str, Tuple[Tuple[Any, Any], ...]] = {}
    tail_max: Dict[str, Any] = {}
    with mpmath.workdps(DPS):
        for p in range(trace.p_max):
            if mode == "dual":
                forms = {
                    f"s(n-psi_{p + 1})": lambda sample, p=p: sample.s * (n - sample.psis[p]),
                    f"s(1+psi_{p + 1})": lambda sample, p=p: sample.s * (1 + sample.psis[p]),
                }
            else:
                forms = {
                    f"s(1+psi_{p + 1})": lambda sample, p=p: sample.s * (1 + sample.psis[p]),
                    f"s(1/n-psi_{p + 1})": lambda sample, p=p: sample.s * (mpmath.mpf(1) / n - sample.psis[p]),
                }
            for name, form in forms.items():
                values = tuple((sample.s, form(sample)) for sample in trace.samples)
                series[name] = values
                tail = [value for s, value in values if s >= window_start]
                tail_max[name] = max(tail) if tail else None
    return DivergenceTrend(series, tail_max)


@dataclass(frozen=True)
class LiminfConsistency:
    event_min: Any
    overall_min: Any
    difference: Any
    events_in_window: int
    passed: bool


def liminf_consistency(trace: Trace, tail_fraction: float = 0.5, tolerance: float = 0.05) -> LiminfConsistency:
    """Compare min ψ_1 over event samples with min ψ_1 over all samples of the tail window."""
    window = trace.window(tail_fraction)
    if not window:
        raise EmptyWindowError(f"no samples in the tail window of fraction {tail_fraction}")
    overall = min(sample.psis[0] for sample in window)
    events = [sample.psis[0] for sample in window if sample.event]
    if not events:
        return LiminfConsistency(None, overall, None, 0, False)
    event_min = min(events)
    difference = event_min - overall
    passed = bool(abs(difference) <= tolerance)
    metrics.record_check("prop:new_liminf", passed)
    return LiminfConsistency(event_min, overall, difference, len(events), passed)


@dataclass(frozen=True)
class MinkowskiBand:
    checked: int
    failures: Tuple[ScaleValue, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def minkowski_band(trace: Trace, d: Optional[int] = None) -> MinkowskiBand:
    """Exact 1/d! ≤ λ_1···λ_d ≤ 1 at every sample; |Σ_p s·ψ_p(s)| ≤ ln d! in ψ form."""
    d = d or trace.m + trace.n
    if trace.p_max != d:
        raise InputError(f"the Minkowski band needs all {d} minima, trace has {trace.p_max}")
    low, high = ScaleValue(Fraction(1, math.factorial(d))), ScaleValue(Fraction(1))
    failures = []
    for sample in trace.samples:
        product = ScaleValue(Fraction(1))
        for lam in sample.lambdas:
            product = product * lam
        if not low <= product <= high:
            failures.append(sample.u)
    metrics.record_check("minkowski", not failures)
    return MinkowskiBand(len(trace.samples), tuple(failures))


@dataclass(frozen=True)
class StabilityReport:
    faithfulness: Fraction
    confirmed_with: Fraction
    checked: int
    disagreements: Tuple[ScaleValue, ...]

    @property
    def passed(self) -> bool:
        return not self.disagreements


def _witnesses_at(lattice: Lattice, path: PathSpec, p_max: int, method: str, budget: Optional[int], u: ScaleValue):
    minima = successive_minima(lattice, box_at(path, u), p_max, method, budget)
    return tuple(w.coefficients for w in minima.witnesses)


@tracer.trace_operation("confirm_stability")
def confirm_stability(
    trace: Trace,
    theta: ThetaSpec,
    path: PathSpec,
    faithfulness: Fraction,
    method: str = "auto",
    budget: Optional[int] = DEFAULT_BUDGET,
    workers: int = 1,
) -> StabilityReport:
    """Recompute every witness of the trace with Θ approximated to faithfulness² and list disagreements."""
    finer = Fraction(faithfulness) ** 2
    build = dual_lattice if trace.mode == "dual" else primal_lattice
    lattice = build(theta, finer)
    us = [sample.u for sample in trace.samples]
    recomputed = map_ordered(partial(_witnesses_at, lattice, path, trace.p_max, method, budget), us, workers)
    disagreements = tuple(
        sample.u for sample, witnesses in zip(trace.samples, recomputed)
        if tuple(w.coefficients for w in sample.witnesses) != witnesses
    )
    if disagreements:
        logger.warning("Witnesses changed under finer approximation", count=len(disagreements))
    return StabilityReport(Fraction(faithfulness), finer, len(us), disagreements)
