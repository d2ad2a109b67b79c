"""
Event Tool.
Front-facet events of the box flow: shrinking, event scans and companion scales.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Dict, List, Optional, Tuple

import mpmath

from core.errors import InputError, NoFrontFacetReachable, NotAnEvent
from core.lattice import Lattice, PathSpec, ScaleLike, box_at, geometric_grid
from core.minima import DEFAULT_BUDGET, LatticePoint, MinimaResult, box_norm, enumerate_in_box, successive_minima
from core.observability import logger, metrics, tracer
from core.scale import ScaleValue
from core.workers import map_ordered

MODES = ("primal", "dual")
_DPS = 30
BRACKET_SLACK = "1e-20"


@dataclass(frozen=True)
class Event:
    """Scale u at which λ_1(B)·B has a lattice point on its front facet |z_1| = λ_1·h_1."""
    u: ScaleValue
    lambda1: ScaleValue
    witness: LatticePoint
    s: Any = field(default=None, compare=False)
    mu: ScaleValue = field(default=ScaleValue(Fraction(1)), compare=False)
    grid_u: Optional[ScaleValue] = field(default=None, compare=False)


@dataclass(frozen=True)
class EventRelationReport:
    """Exact ratio checks at an event scale u0 and its companion scale u1."""
    mode: str
    p: int
    u0: ScaleValue
    u1: ScaleValue
    s0: Any
    s1: Any
    s1_predicted: Any
    lambda_1: ScaleValue
    lambda_p0: ScaleValue
    lambda_p1: ScaleValue
    ratios: Tuple[ScaleValue, ...]
    ratio_passes: Tuple[bool, ...]
    brackets: Tuple[Tuple[str, Any, Any, Any], ...]

    @property
    def passed(self) -> bool:
        return all(self.ratio_passes)

    @property
    def brackets_hold(self) -> bool:
        """Every bracketed form of s1 − s0 holds up to BRACKET_SLACK, compared at 30 digits."""
        with mpmath.workdps(_DPS):
            slack = mpmath.mpf(BRACKET_SLACK)
            return all(lo - slack <= mid <= hi + slack for _, lo, mid, hi in self.brackets)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "p": self.p,
            "u0": self.u0.to_decimal(),
            "u1": self.u1.to_decimal(),
            "s0": mpmath.nstr(self.s0, 12),
            "s1": mpmath.nstr(self.s1, 12),
            "s1_predicted": mpmath.nstr(self.s1_predicted, 12),
            "ratios": [r.to_decimal(12) for r in self.ratios],
            "ratio_passes": list(self.ratio_passes),
            "brackets": [
                {"form": name, "lower": mpmath.nstr(lo, 12), "value": mpmath.nstr(mid, 12), "upper": mpmath.nstr(hi, 12)}
                for name, lo, mid, hi in self.brackets
            ],
            "brackets_hold": self.brackets_hold,
            "passed": self.passed,
        }


def _require_axis_path(lattice: Lattice, path: PathSpec):
    if path.dimension != lattice.dimension:
        raise InputError(f"path dimension {path.dimension} does not match lattice dimension {lattice.dimension}")
    if len(set(path.weights[1:])) != 1 or path.weights[0] == 0:
        raise InputError(f"front-facet shrinking needs w_2 = ... = w_d and w_1 != 0, got {path.weights}")


def _axis_power(value: ScaleValue, path: PathSpec) -> ScaleValue:
    """value^((d−1)/(d·w_1)): the factor on u that rescales the first axis by `value` along the path."""
    d, w1 = path.dimension, path.weights[0]
    root = (value ** (d - 1)).root(d * abs(w1))
    return root if w1 > 0 else root.reciprocal()


def path_mode(path: PathSpec) -> str:
    """"primal" or "dual" bracketed forms for a path with w_2 = ... = w_d."""
    if path.label in MODES:
        return path.label
    return "primal" if path.weights[0] > 0 else "dual"


@tracer.trace_operation("shrink_to_event")
def shrink_to_event(
    lattice: Lattice,
    path: PathSpec,
    u: ScaleLike,
    method: str = "auto",
    budget: Optional[int] = DEFAULT_BUDGET,
    lambda1: Optional[ScaleValue] = None,
) -> Event:
    """
    Shrink λ_1(B(u))·B(u) along the first axis until a lattice point meets the front facet.

    μ is the largest |v_1| / (λ_1·h_1) over the nonzero lattice points of λ_1·B(u); the
    witness is the lexicographically least point attaining it. The event sits at
    u' = u·μ^((d−1)/(d·w_1)) with λ_1(B(u')) = μ^(1/d)·λ_1(B(u)).

    `lambda1` skips recomputing λ_1(B(u)) when the caller already has it.

    Raises:
        NoFrontFacetReachable: every point of λ_1·B(u) has first coordinate 0.
    """
    _require_axis_path(lattice, path)
    u = ScaleValue.of(u)
    box = box_at(path, u)
    if lambda1 is None:
        lambda1 = successive_minima(lattice, box, 1, method, budget).lambda_1
    front = lambda1 * box.half_widths[0]

    mu: Optional[ScaleValue] = None
    witness: Optional[LatticePoint] = None
    for point in enumerate_in_box(lattice, box, lambda1, budget, method):
        z1 = point.coordinates[0]
        if not z1:
            continue
        ratio = ScaleValue(abs(z1)) / front
        if mu is None or ratio > mu or (ratio == mu and point.coefficients < witness.coefficients):
            mu, witness = ratio, point

    if mu is None:
        raise NoFrontFacetReachable(
            f"no point of λ_1·B at u={u.to_decimal(12)} has a nonzero first coordinate",
            {"u": u.to_decimal(12), "lattice": lattice.label},
        )

    if mu == 1:
        event_u, event_lambda = u, lambda1
    else:
        event_u = (u * _axis_power(mu, path)).canonical
        event_lambda = (lambda1 * mu.root(path.dimension)).canonical
        if event_u <= 1:
            raise NoFrontFacetReachable(
                f"shrinking at u={u.to_decimal(12)} leaves the path domain u > 1",
                {"u": u.to_decimal(12), "mu": mu.to_decimal(12)},
            )
    with mpmath.workdps(_DPS):
        s = path.s_at(event_u)
    return Event(event_u, event_lambda, witness, s, mu.canonical, u)


def _event_or_none(lattice: Lattice, path: PathSpec, method: str, budget: Optional[int], u: Fraction) -> Optional[Event]:
    try:
        return shrink_to_event(lattice, path, u, method, budget)
    except NoFrontFacetReachable as e:
        logger.debug("Grid point has no front-facet event", u=str(u), reason=str(e))
        return None


@tracer.trace_operation("front_facet_events")
def front_facet_events(
    lattice: Lattice,
    path: PathSpec,
    u_min: Fraction,
    u_max: Fraction,
    grid_count: int,
    method: str = "auto",
    budget: Optional[int] = DEFAULT_BUDGET,
    workers: int = 1,
) -> List[Event]:
    """
    Events found by shrinking at every point of a geometric grid over [u_min, u_max].

    Events are deduplicated by witness coefficients, keeping the smallest u, and sorted by u.
    Completeness is limited by the grid resolution.

    Raises:
        NoFrontFacetReachable: no grid point produced an event.
    """
    _require_axis_path(lattice, path)
    grid = geometric_grid(Fraction(u_min), Fraction(u_max), grid_count)
    found = map_ordered(partial(_event_or_none, lattice, path, method, budget), grid, workers)

    if not any(found):
        raise NoFrontFacetReachable(
            f"no grid point in [{u_min}, {u_max}] reaches the front facet",
            {"grid_count": len(grid), "lattice": lattice.label},
        )

    events = dedupe_events(found)
    for _ in range(sum(event is None for event in found)):
        metrics.record_error("NoFrontFacetReachable", "events.grid")
    for _ in events:
        metrics.record_event(path_mode(path))
    logger.info(
        "Front-facet events detected",
        lattice=lattice.label,
        grid_points=len(grid),
        failed_grid_points=sum(event is None for event in found),
        events=len(events),
    )
    return events


def dedupe_events(found: List[Optional[Event]]) -> List[Event]:
    """One event per witness, the one with the smallest u, sorted by u."""
    by_witness: Dict[Tuple[int, ...], Event] = {}
    for event in found:
        if event is None:
            continue
        key = event.witness.coefficients
        if key not in by_witness or event.u < by_witness[key].u:
            by_witness[key] = event
    return sorted(by_witness.values(), key=lambda event: event.u)


def companion_scale(event: Event, p: int, minima_at_event: MinimaResult, path: PathSpec) -> ScaleValue:
    """
    Companion scale u₁ with h_1(u₁) = h_1(u₀)·(λ_1/λ_p)^(n/d), n = d − 1.

    Equals u₀ when λ_p = λ_1; in primal mode a larger λ_p/λ_1 gives a smaller u₁.

    Raises:
        InputError: u₁ falls outside the path domain u > 1.
    """
    if not 1 <= p <= minima_at_event.p:
        raise InputError(f"p must lie in [1, {minima_at_event.p}], got {p}")
    ratio = minima_at_event.lambdas[0] / minima_at_event.lambdas[p - 1]
    if ratio == 1:
        return event.u
    u1 = (event.u * _axis_power(ratio, path)).canonical
    if u1 <= 1:
        raise InputError(
            f"companion scale of the event at u={event.u.to_decimal(12)} leaves u > 1",
            {"u0": event.u.to_decimal(12), "u1": u1.to_decimal(12)},
        )
    return u1


def _check_contact(lattice: Lattice, event: Event, box, lambda1: ScaleValue):
    witness = event.witness
    z1 = witness.coordinates[0]
    problems = []
    if tuple(lattice.coordinates(witness.coefficients)) != tuple(witness.coordinates):
        problems.append("witness is not a point of this lattice")
    elif lambda1 != event.lambda1:
        problems.append(f"λ_1 at u0 is {lambda1.to_decimal(12)}, event records {event.lambda1.to_decimal(12)}")
    elif not z1 or ScaleValue(abs(z1)) != event.lambda1 * box.half_widths[0]:
        problems.append("witness is off the front facet")
    elif box_norm(witness, box) != event.lambda1:
        problems.append("witness norm differs from λ_1")
    if problems:
        raise NotAnEvent(f"not a front-facet event at u={event.u.to_decimal(12)}: {problems[0]}", {"u": event.u.to_decimal(12)})


def _brackets(mode: str, d: int, s0, s1, ln_l1, ln_lp0, ln_lp1) -> Tuple[Tuple[str, Any, Any, Any], ...]:
    ln2 = mpmath.log(2)
    n = d - 1
    if mode == "primal":
        first = s0 + ln_l1
        second = s0 / n - ln_lp0
        return (
            ("s(1+psi_p)", first, s1 + ln_lp1, first + ln2),
            ("s(1/n-psi_p)", second - ln2, s1 / n - ln_lp1, second),
        )
    first = n * s0 - ln_l1
    second = s0 + ln_lp0
    return (
        ("s(n-psi_p)", first - ln2, n * s1 - ln_lp1, first),
        ("s(1+psi_p)", second, s1 + ln_lp1, second + ln2),
    )


@tracer.trace_operation("verify_event_relations")
def verify_event_relations(
    lattice: Lattice,
    path: PathSpec,
    event: Event,
    p: int,
    mode: Optional[str] = None,
    method: str = "auto",
    budget: Optional[int] = DEFAULT_BUDGET,
) -> EventRelationReport:
    """
    Check 1 ≤ h_1(u₁)λ_p(u₁) / (h_1(u₀)λ_1(u₀)) ≤ 2 and 1 ≤ h_i(u₁)λ_p(u₁) / (h_i(u₀)λ_p(u₀)) ≤ 2
    for i ≥ 2, exactly, at an event u₀ and its companion scale u₁.

    Args:
        lattice: The lattice the event was detected on.
        path: Path with w_2 = ... = w_d.
        event: Event from shrink_to_event or front_facet_events.
        p: Index of the minimum, 1 ≤ p ≤ d.
        mode: "primal" or "dual" bracketed forms; inferred from the path when omitted.

    Returns:
        EventRelationReport with the d exact ratios, their pass flags, the bracketed
        s-forms and the predicted s₁.

    Raises:
        NotAnEvent: the event does not touch the front facet of λ_1·B at u₀.
    """
    _require_axis_path(lattice, path)
    mode = mode or path_mode(path)
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}, got {mode!r}")
    d = lattice.dimension
    if not 1 <= p <= d:
        raise InputError(f"p must lie in [1, {d}], got {p}")

    box0 = box_at(path, event.u)
    minima0 = successive_minima(lattice, box0, p, method, budget)
    _check_contact(lattice, event, box0, minima0.lambda_1)

    u1 = companion_scale(event, p, minima0, path)
    box1 = box_at(path, u1)
    minima1 = successive_minima(lattice, box1, p, method, budget)

    lambda_1, lambda_p0, lambda_p1 = minima0.lambda_1, minima0.lambda_p, minima1.lambda_p
    ratios = [(box1.half_widths[0] * lambda_p1 / (box0.half_widths[0] * lambda_1)).canonical]
    for i in range(1, d):
        ratios.append((box1.half_widths[i] * lambda_p1 / (box0.half_widths[i] * lambda_p0)).canonical)
    passes = tuple(1 <= ratio <= 2 for ratio in ratios)

    with mpmath.workdps(_DPS):
        s0, s1 = path.s_at(event.u), path.s_at(u1)
        ln_l1, ln_lp0, ln_lp1 = lambda_1.ln(), lambda_p0.ln(), lambda_p1.ln()
        if mode == "primal":
            s1_predicted = s0 + mpmath.mpf(d - 1) / d * (ln_l1 - ln_lp0)
        else:
            s1_predicted = s0 + (ln_lp0 - ln_l1) / d
        brackets = _brackets(mode, d, s0, s1, ln_l1, ln_lp0, ln_lp1)

    for passed in passes:
        metrics.record_check("eq:core", passed)
    return EventRelationReport(
        mode, p, event.u, u1, s0, s1, s1_predicted,
        lambda_1, lambda_p0, lambda_p1, tuple(ratios), passes, brackets,
    )

