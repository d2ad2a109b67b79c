"""
Successive minima of boxes with respect to lattices, computed exactly.

Two engines give the same answers. The scan engine walks the first coordinate of a
structured primal lattice with m = 1. The reduced engine runs LLL on a rationally scaled
basis and enumerates with Fincke–Pohst, finishing every search line with an exact
one-dimensional convex minimization. Witnesses are chosen greedily by increasing norm,
ties broken by coefficient height (largest |a_i|) and then by the lexicographic order of
normalized integer coefficients.
"""
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import EnumerationBudgetExceeded, InputError, ZeroPointError
from .lattice import Box, Lattice, ScaleLike
from .linalg import gram_schmidt, inverse, lll_reduce, orthogonal_complement, outside_span, rank, saturating_basis
from .observability import logger, metrics, tracer
from .scale import ScaleValue

DEFAULT_BUDGET = 2_000_000
SCAN_LIMIT = 4096
METHODS = ("auto", "scan", "reduced")

_SCALE_BITS = 48


@dataclass(frozen=True)
class LatticePoint:
    """Integer coefficients a in the lattice basis and the exact point z = basis·a."""
    coefficients: Tuple[int, ...]
    coordinates: Tuple[Fraction, ...]

    @classmethod
    def from_coefficients(cls, lattice: Lattice, coefficients: Sequence[int]) -> "LatticePoint":
        coefficients = tuple(int(a) for a in coefficients)
        if len(coefficients) != lattice.dimension:
            raise InputError(f"expected {lattice.dimension} coefficients, got {len(coefficients)}")
        return cls(coefficients, lattice.coordinates(coefficients))

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def negated(self) -> "LatticePoint":
        return LatticePoint(tuple(-a for a in self.coefficients), tuple(-z for z in self.coordinates))

    def normalized(self) -> "LatticePoint":
        """The member of ±self whose first nonzero coefficient is positive."""
        for a in self.coefficients:
            if a:
                return self if a > 0 else self.negated()
        return self


@dataclass(frozen=True)
class MinimaResult:
    p: int
    lambdas: Tuple[ScaleValue, ...]
    witnesses: Tuple[LatticePoint, ...]
    method: str = field(default="reduced", compare=False)
    nodes: int = field(default=0, compare=False)

    @property
    def lambda_1(self) -> ScaleValue:
        return self.lambdas[0]

    @property
    def lambda_p(self) -> ScaleValue:
        return self.lambdas[-1]

    def product(self) -> ScaleValue:
        value = ScaleValue(Fraction(1))
        for lam in self.lambdas:
            value = value * lam
        return value


def _norm_of(coordinates: Sequence[Fraction], half_widths: Sequence[ScaleValue]) -> Optional[ScaleValue]:
    best = None
    for z, h in zip(coordinates, half_widths):
        if z:
            ratio = ScaleValue(abs(z)) / h
            if best is None or ratio > best:
                best = ratio
    return best


def box_norm(point: LatticePoint, box: Box) -> ScaleValue:
    """Gauge of the box at `point`: max_i |z_i| / h_i."""
    if len(point.coordinates) != box.dimension:
        raise InputError(f"point has {len(point.coordinates)} coordinates, box has {box.dimension}")
    if point.is_zero:
        raise ZeroPointError("box_norm is undefined at the zero point")
    return _norm_of(point.coordinates, box.half_widths)


def _leading_positive(values: Sequence[int]) -> bool:
    for v in values:
        if v:
            return v > 0
    return False


def _sqrt_upper(value: Fraction) -> Fraction:
    num, den = value.numerator, value.denominator
    return Fraction(math.isqrt(num * den) + 1, den)


def _first_true(lo: int, hi: int, predicate: Callable[[int], bool]) -> int:
    """Smallest a in [lo, hi) with predicate(a) for a monotone predicate, else hi."""
    while lo < hi:
        mid = (lo + hi) // 2
        if predicate(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _zigzag(center: Fraction, lo: int, hi: int) -> Iterator[int]:
    """Integers of [lo, hi] in order of distance from `center`."""
    if lo > hi:
        return
    start = min(max(round(center), lo), hi)
    yield start
    down, up = start - 1, start + 1
    while down >= lo or up <= hi:
        if up <= hi and (down < lo or up - center <= center - down):
            yield up
            up += 1
        else:
            yield down
            down -= 1


class _Counter:
    def __init__(self, budget: Optional[int]):
        self.budget = budget
        self.nodes = 0

    def tick(self, amount: int = 1):
        self.nodes += amount
        if self.budget is not None and self.nodes > self.budget:
            raise EnumerationBudgetExceeded(
                f"enumeration visited more than {self.budget} nodes; reduce the scale or raise the budget",
                {"nodes": self.nodes, "budget": self.budget},
            )


class _Limits:
    """Exact test |z_i| ≤ scale·h_i with rational fast paths on both sides."""

    def __init__(self, box: Box, scale: ScaleLike):
        scale = ScaleValue.of(scale)
        self.bounds = [scale * h for h in box.half_widths]
        self.low = [b.lower_bound() for b in self.bounds]
        self.high = [b.upper_bound() for b in self.bounds]

    def contains(self, coordinates: Sequence[Fraction]) -> bool:
        for z, bound, low, high in zip(coordinates, self.bounds, self.low, self.high):
            z = abs(z)
            if z <= low:
                continue
            if z > high or ScaleValue(z) > bound:
                return False
        return True


def _height(coefficients: Sequence[int]) -> int:
    return max(abs(a) for a in coefficients)


def _tie_key(point: LatticePoint) -> Tuple[int, Tuple[int, ...]]:
    """Order among points of equal norm: height first, then normalized coefficients."""
    return _height(point.coefficients), point.coefficients


def _greedy(points: Sequence[LatticePoint], box: Box, p: int) -> Tuple[List[ScaleValue], List[LatticePoint]]:
    ranked = sorted(
        ((_norm_of(pt.coordinates, box.half_widths),) + _tie_key(pt) + (pt,) for pt in points),
        key=lambda item: item[:3],
    )
    lambdas: List[ScaleValue] = []
    witnesses: List[LatticePoint] = []
    normals = orthogonal_complement([], box.dimension)
    for norm, _, coefficients, point in ranked:
        if outside_span(coefficients, normals):
            lambdas.append(norm)
            witnesses.append(point)
            normals = orthogonal_complement([w.coefficients for w in witnesses], box.dimension)
            if len(witnesses) == p:
                break
    return lambdas, witnesses


# Scan engine: structured primal lattices with m = 1, points (x, y_j − θ̃_j·x)

def _scan_width(box: Box, scale: ScaleLike) -> int:
    return math.floor((ScaleValue.of(scale) * box.half_widths[0]).upper_bound())


def _scan_enumerate(lattice: Lattice, box: Box, scale: ScaleLike, counter: _Counter) -> List[LatticePoint]:
    limits = _Limits(box, scale)
    thetas = [row[0] for row in lattice.theta]
    points = []
    for x in range(math.floor(limits.high[0]) + 1):
        counter.tick()
        ranges = []
        for theta, width in zip(thetas, limits.high[1:]):
            center = theta * x
            ranges.append(range(math.ceil(center - width), math.floor(center + width) + 1))
        for ys in product(*ranges):
            counter.tick()
            if x == 0 and not _leading_positive(ys):
                continue
            coordinates = (Fraction(x),) + tuple(y - theta * x for y, theta in zip(ys, thetas))
            if limits.contains(coordinates):
                points.append(LatticePoint((x,) + tuple(ys), coordinates))
    return points


def _scan_minima(
    lattice: Lattice, box: Box, p: int, counter: _Counter, width_limit: Optional[int] = None
) -> Optional[Tuple[List[ScaleValue], List[LatticePoint]]]:
    """Enumerate at scales 1, 2, 4, ... until p independent points are inside."""
    scale = Fraction(1)
    while True:
        if width_limit is not None and _scan_width(box, scale) > width_limit:
            return None
        lambdas, witnesses = _greedy(_scan_enumerate(lattice, box, scale, counter), box, p)
        if len(witnesses) == p:
            return lambdas, witnesses
        scale *= 2


# Reduced engine

class _ReducedSearch:
    """
    Fincke–Pohst search on an LLL-reduced basis of the lattice scaled by rational lower
    bounds of the half-widths.

    The first r reduced vectors span the saturated span of `fixed`; `minimize` only
    returns points outside that span. An l2 ball of squared radius d·(κ·R)² in scaled
    coordinates contains every point of box norm at most R. Each reduced coordinate is
    also capped by the box itself: c_k = ⟨z, ℓ_k⟩ for the dual row ℓ_k, so a point of
    norm at most R has |c_k| ≤ Σ_i |ℓ_k,i|·R·h_i.
    """

    def __init__(self, lattice: Lattice, box: Box, fixed: Sequence[Sequence[int]], counter: _Counter):
        self.lattice = lattice
        self.box = box
        self.counter = counter
        self.d = d = lattice.dimension
        self.r = len(fixed)

        lows = [h.lower_bound(_SCALE_BITS) for h in box.half_widths]
        self.kappa = max(h.upper_bound() / low for h, low in zip(box.half_widths, lows))

        transform = saturating_basis(fixed, d)
        basis = [[z / low for z, low in zip(lattice.coordinates(t), lows)] for t in transform]
        lll_reduce(basis, transform, self.r)
        self.transform = transform
        self.norms, self.mu = gram_schmidt(basis)

        dual = inverse([lattice.coordinates(t) for t in transform])
        self.dual_rows = [[abs(dual[i][k]) for i in range(d)] for k in range(d)]
        coefficient_dual = inverse(transform)
        self.spread = [sum(abs(coefficient_dual[i][k]) for i in range(d)) for k in range(d)]

        self.radius2: Optional[Fraction] = None
        self.caps: List[ScaleValue] = []
        self.best: Optional[ScaleValue] = None
        self.best_point: Optional[LatticePoint] = None
        self.best_key: Optional[Tuple] = None
        self.limits: Optional[_Limits] = None
        self.found: List[LatticePoint] = []
        self._collecting = False

    def _set_radius(self, bound: ScaleLike):
        bound = ScaleValue.of(bound)
        rho = self.kappa * bound.upper_bound()
        self.radius2 = self.d * rho * rho
        self.caps = [self._cap(k, bound) for k in range(self.d)]

    def _cap(self, level: int, bound: ScaleValue) -> ScaleValue:
        terms = [bound * h * w for w, h in zip(self.dual_rows[level], self.box.half_widths) if w]
        if len(terms) == 1:
            return terms[0]
        if all(t.is_rational for t in terms):
            return ScaleValue(sum(t.as_fraction() for t in terms))
        return ScaleValue(sum(t.upper_bound() for t in terms))

    def _on_cap(self, level: int, value: int) -> bool:
        """True when every point below this node has norm at least the current best."""
        return not self._collecting and value != 0 and self.caps[level] <= abs(value)

    def _combine(self, c: Sequence[int]) -> Tuple[int, ...]:
        return tuple(
            sum(ck * t[i] for ck, t in zip(c, self.transform) if ck)
            for i in range(self.d)
        )

    def _window(self, level: int, center: Fraction, dist: Fraction, tied: bool) -> Optional[Tuple[int, int]]:
        slack = self.radius2 - dist
        if slack < 0:
            return None
        width = _sqrt_upper(slack / self.norms[level])
        cap = math.floor(self.caps[level].upper_bound())
        lo, hi = max(math.ceil(center - width), -cap), min(math.floor(center + width), cap)
        if tied:
            # only ties remain, and a tie needs height ≤ the best height
            limit = math.floor(self.spread[level] * _height(self.best_point.coefficients))
            lo, hi = max(lo, -limit), min(hi, limit)
        return lo, hi

    def _walk(self, level: int, c: List[int], dist: Fraction, tied: bool = False):
        center = -sum(c[j] * self.mu[j][level] for j in range(level + 1, self.d) if c[j])
        if level == 0:
            if self._collecting:
                self._collect_leaf(c, center, dist)
            else:
                self._minimize_leaf(c, center, dist, tied)
            return
        window = self._window(level, center, dist, tied)
        if window is None:
            return
        lo, hi = window
        if level >= self.r and not any(c[level + 1:]):
            lo = max(lo, 0)
        for value in _zigzag(center, lo, hi):
            self.counter.tick()
            step = value - center
            partial = dist + step * step * self.norms[level]
            if partial > self.radius2:
                continue
            c[level] = value
            if level == self.r and not any(c[self.r:]):
                continue
            self._walk(level - 1, c, partial, tied or self._on_cap(level, value))
        c[level] = 0

    # Collect mode: every point with box norm ≤ scale, one per ± pair

    def collect(self, scale: ScaleLike) -> List[LatticePoint]:
        self._collecting = True
        self._set_radius(scale)
        self.limits = _Limits(self.box, scale)
        self.found = []
        self._walk(self.d - 1, [0] * self.d, Fraction(0))
        return sorted(self.found, key=lambda pt: pt.coefficients)

    def _collect_leaf(self, c: List[int], center: Fraction, dist: Fraction):
        window = self._window(0, center, dist, False)
        if window is None:
            return
        lo, hi = window
        if not any(c[1:]):
            lo = max(lo, 1)
        for value in range(lo, hi + 1):
            self.counter.tick()
            step = value - center
            if dist + step * step * self.norms[0] > self.radius2:
                continue
            c[0] = value
            coefficients = self._combine(c)
            coordinates = self.lattice.coordinates(coefficients)
            if self.limits.contains(coordinates):
                self.found.append(LatticePoint(coefficients, coordinates).normalized())
        c[0] = 0

    # Minimize mode: least (norm, height, normalized coefficients) outside the fixed span

    def minimize(self) -> Tuple[ScaleValue, LatticePoint]:
        for k in range(self.r, self.d):
            self._offer(tuple(self.transform[k]))
        self._walk(self.d - 1, [0] * self.d, Fraction(0))
        return self.best, self.best_point

    def _offer(self, coefficients: Tuple[int, ...], norm: Optional[ScaleValue] = None):
        point = LatticePoint(coefficients, self.lattice.coordinates(coefficients)).normalized()
        if norm is None:
            norm = _norm_of(point.coordinates, self.box.half_widths)
        key = (norm,) + _tie_key(point)
        if self.best_key is None or key < self.best_key:
            self.best, self.best_point, self.best_key = norm, point, key
            self._set_radius(norm)

    def _minimize_leaf(self, c: List[int], center: Fraction, dist: Fraction, tied: bool):
        window = self._window(0, center, dist, tied)
        if window is None:
            return
        if not any(c[1:]):
            self.counter.tick()
            self._offer(tuple(self.transform[0]))
            return
        c[0] = 0
        self._line_minimum(self._combine(c), self.transform[0], *window)

    def _line_minimum(self, base: Sequence[int], direction: Sequence[int], lo: int, hi: int):
        if lo > hi:
            return
        offset = self.lattice.coordinates(base)
        step = self.lattice.coordinates(direction)
        widths = self.box.half_widths
        cache: Dict[int, ScaleValue] = {}

        def f(a: int) -> ScaleValue:
            if a not in cache:
                self.counter.tick()
                cache[a] = _norm_of([o + a * s for o, s in zip(offset, step)], widths)
            return cache[a]

        def height(a: int) -> int:
            return max(abs(b + a * g) for b, g in zip(base, direction))

        # f and height are convex along the line, so each step keeps an interval of minimizers
        left = _first_true(lo, hi, lambda a: f(a + 1) >= f(a))
        right = _first_true(left, hi, lambda a: f(a + 1) > f(a))
        value = f(left)
        left = _first_true(left, right, lambda a: height(a + 1) >= height(a))
        right = _first_true(left, right, lambda a: height(a + 1) > height(a))

        # the normalized coefficients are affine between sign changes, so the
        # lexicographic minimum sits at an end of [left, right] or next to a root
        candidates = {left, left + 1, right - 1, right}
        for b, g in zip(base, direction):
            if g:
                root = math.floor(Fraction(-b, g))
                candidates.update(range(root - 1, root + 3))
        for a in sorted(a for a in candidates if left <= a <= right):
            self._offer(tuple(b + a * g for b, g in zip(base, direction)), value)


def _check_method(lattice: Lattice, method: str):
    if method not in METHODS:
        raise InputError(f"unknown minima method {method!r}, expected one of {METHODS}")
    if method == "scan" and not lattice.is_structured_primal:
        raise InputError("the scan engine needs a primal lattice with m = 1")


def _check_box(lattice: Lattice, box: Box):
    if box.dimension != lattice.dimension:
        raise InputError(f"box dimension {box.dimension} does not match lattice dimension {lattice.dimension}")


def _budget_exceeded(error: EnumerationBudgetExceeded, operation: str, lattice: Lattice):
    logger.log_budget_exceeded(
        error.context.get("nodes", 0), error.context.get("budget", 0),
        {"operation": operation, "lattice": lattice.label},
    )
    metrics.record_error(type(error).__name__, f"minima.{operation}")


@tracer.trace_operation("enumerate_in_box")
def enumerate_in_box(
    lattice: Lattice,
    box: Box,
    scale: ScaleLike,
    budget: Optional[int] = DEFAULT_BUDGET,
    method: str = "auto",
) -> List[LatticePoint]:
    """
    Every nonzero lattice point z with |z_i| ≤ scale·h_i, one per ± pair.

    Points are normalized (first nonzero coefficient positive) and sorted by their
    coefficients.

    Raises:
        EnumerationBudgetExceeded: more than `budget` search nodes were needed.
    """
    _check_box(lattice, box)
    _check_method(lattice, method)
    scale = ScaleValue.of(scale)
    counter = _Counter(budget)
    use_scan = method == "scan" or (
        method == "auto" and lattice.is_structured_primal and _scan_width(box, scale) <= SCAN_LIMIT
    )
    try:
        if use_scan:
            points = sorted(_scan_enumerate(lattice, box, scale, counter), key=lambda pt: pt.coefficients)
        else:
            points = _ReducedSearch(lattice, box, [], counter).collect(scale)
    except EnumerationBudgetExceeded as e:
        _budget_exceeded(e, "enumerate_in_box", lattice)
        raise
    metrics.record_enumeration("scan" if use_scan else "reduced", counter.nodes)
    return points


@tracer.trace_operation("successive_minima")
def successive_minima(
    lattice: Lattice,
    box: Box,
    p: int,
    method: str = "auto",
    budget: Optional[int] = DEFAULT_BUDGET,
) -> MinimaResult:
    """
    Exact λ_1 ≤ ... ≤ λ_p of `box` with respect to `lattice`, with independent witnesses.

    Args:
        lattice: Full-rank lattice.
        box: Box of the same dimension.
        p: Number of minima, 1 ≤ p ≤ d.
        method: "scan", "reduced" or "auto" (scan for structured primal lattices while the
            first-coordinate range stays within SCAN_LIMIT).
        budget: Node cap shared by the whole computation; None disables it.

    Returns:
        MinimaResult whose witness i has box norm λ_i exactly.
    """
    _check_box(lattice, box)
    _check_method(lattice, method)
    if not 1 <= p <= lattice.dimension:
        raise InputError(f"p must lie in [1, {lattice.dimension}], got {p}")

    start_time = time.time()
    counter = _Counter(budget)
    try:
        found = None
        if method == "scan":
            found = _scan_minima(lattice, box, p, counter)
        elif method == "auto" and lattice.is_structured_primal:
            found = _scan_minima(lattice, box, p, counter, width_limit=SCAN_LIMIT)
        engine = "scan" if found is not None else "reduced"
        if found is None:
            found = _reduced_minima(lattice, box, p, counter)
    except EnumerationBudgetExceeded as e:
        _budget_exceeded(e, "successive_minima", lattice)
        raise

    lambdas, witnesses = found
    metrics.record_minima(engine, time.time() - start_time, counter.nodes)
    return MinimaResult(p, tuple(lambdas), tuple(witnesses), engine, counter.nodes)


def _reduced_minima(lattice: Lattice, box: Box, p: int, counter: _Counter) -> Tuple[List[ScaleValue], List[LatticePoint]]:
    lambdas: List[ScaleValue] = []
    witnesses: List[LatticePoint] = []
    for _ in range(p):
        value, point = _ReducedSearch(lattice, box, [w.coefficients for w in witnesses], counter).minimize()
        lambdas.append(value)
        witnesses.append(point)
    return lambdas, witnesses


def minimum_outside_span(
    lattice: Lattice,
    box: Box,
    points: Sequence[LatticePoint],
    budget: Optional[int] = DEFAULT_BUDGET,
) -> Tuple[ScaleValue, LatticePoint]:
    """Least box norm over lattice points outside span(points), with its normalized witness."""
    _check_box(lattice, box)
    fixed = [pt.coefficients for pt in points]
    if len(fixed) >= lattice.dimension:
        raise InputError("points already span the whole space")
    if rank(fixed) != len(fixed):
        raise InputError("points must be linearly independent")
    counter = _Counter(budget)
    try:
        return _ReducedSearch(lattice, box, fixed, counter).minimize()
    except EnumerationBudgetExceeded as e:
        _budget_exceeded(e, "minimum_outside_span", lattice)
        raise


def minkowski_band_holds(result: MinimaResult, box: Box, lattice: Lattice) -> bool:
    """det/d! ≤ λ_1···λ_d·Π h_i ≤ det, compared exactly."""
    d = lattice.dimension
    if result.p != d:
        raise InputError(f"the Minkowski band needs all {d} minima, got {result.p}")
    det = abs(lattice.determinant())
    volume = result.product() * box.volume_factor()
    return ScaleValue(det / math.factorial(d)) <= volume <= ScaleValue(det)
