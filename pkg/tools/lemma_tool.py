"""
Lemma Tool.
Randomized checks of the front-facet lemma: if P₁ has a lattice point v on its boundary with
v_1 = h_1 and P₂ = λ·P₁ holds p independent lattice points, then so does 2P₃, where
P₃ = {z ∈ P₂ : |z_1| ≤ h_1}.
"""
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import HypothesisViolation, InputError, LemmaViolation
from core.lattice import Box, Lattice
from core.linalg import identity, mat_mul, orthogonal_complement, outside_span, rank
from core.minima import DEFAULT_BUDGET, LatticePoint, enumerate_in_box, successive_minima
from core.observability import logger, metrics, tracer
from core.workers import map_ordered

SHEARS_PER_DIMENSION = 2


def random_unimodular_lattice(seed, d: int, entry_bound: int = 3, denominator_bound: int = 1) -> Lattice:
    """
    Product of random elementary shears, so the determinant is exactly ±1.

    Shear factors are rationals a/q with 1 ≤ |a| ≤ entry_bound·q and 1 ≤ q ≤ denominator_bound;
    one random sign flip makes det = −1 reachable.
    """
    if d < 2:
        raise InputError(f"d must be at least 2, got {d}")
    if entry_bound < 1 or denominator_bound < 1:
        raise InputError("entry_bound and denominator_bound must be positive")
    rng = random.Random(seed)
    basis = [[Fraction(x) for x in row] for row in identity(d)]
    for _ in range(SHEARS_PER_DIMENSION * d):
        i, j = rng.sample(range(d), 2)
        q = rng.randint(1, denominator_bound)
        a = rng.choice([-1, 1]) * rng.randint(1, entry_bound * q)
        shear = [[Fraction(x) for x in row] for row in identity(d)]
        shear[i][j] = Fraction(a, q)
        basis = mat_mul(basis, shear)
    if rng.random() < 0.5:
        k = rng.randrange(d)
        basis = [[-x if col == k else x for col, x in enumerate(row)] for row in basis]
    return Lattice.from_basis(basis, "random")


@dataclass(frozen=True)
class LemmaInstance:
    """P₁ with half-widths h, the factor λ ≥ 1, the rank p and the boundary point v."""
    lattice: Lattice
    half_widths: Tuple[Fraction, ...]
    lam: Fraction
    p: int
    v: LatticePoint
    seed: str = field(default="", compare=False)

    @property
    def dimension(self) -> int:
        return len(self.half_widths)

    def p2(self) -> Box:
        return Box.from_rationals([self.lam * h for h in self.half_widths])

    def doubled_p3(self) -> Box:
        """2P₃: |z_1| ≤ 2h_1 and |z_j| ≤ 2λh_j for j ≥ 2."""
        h = self.half_widths
        return Box.from_rationals([2 * h[0]] + [2 * self.lam * hj for hj in h[1:]])


@dataclass(frozen=True)
class LemmaReport:
    companions: Tuple[LatticePoint, ...]
    constructed: Tuple[LatticePoint, ...]
    floor_coefficients: Tuple[int, ...]
    floor_bound_holds: bool
    inside_doubled_p3: bool
    independent: bool
    enumeration_confirmed: bool

    @property
    def passed(self) -> bool:
        return self.floor_bound_holds and self.inside_doubled_p3 and self.independent and self.enumeration_confirmed


def _reject(instance: LemmaInstance, reason: str):
    raise HypothesisViolation(reason, {"seed": instance.seed})


def _check_hypotheses(instance: LemmaInstance):
    lattice, h, v = instance.lattice, instance.half_widths, instance.v
    d = instance.dimension
    if lattice.dimension != d or len(v.coordinates) != d:
        _reject(instance, "dimensions of lattice, half-widths and v differ")
    if any(hi <= 0 for hi in h):
        _reject(instance, "half-widths must be positive")
    if instance.lam < 1:
        _reject(instance, f"λ must be at least 1, got {instance.lam}")
    if not 1 <= instance.p <= d:
        _reject(instance, f"p must lie in [1, {d}], got {instance.p}")
    if tuple(lattice.coordinates(v.coefficients)) != tuple(v.coordinates):
        _reject(instance, "v is not a lattice point")
    if v.coordinates[0] != h[0]:
        _reject(instance, f"v_1 = {v.coordinates[0]} differs from h_1 = {h[0]}")
    if any(abs(z) > hi for z, hi in zip(v.coordinates, h)):
        _reject(instance, "v lies outside P₁")


def _independent_completion(
    v: LatticePoint, candidates: Sequence[LatticePoint], count: int
) -> List[LatticePoint]:
    chosen: List[LatticePoint] = []
    normals = orthogonal_complement([v.coefficients], len(v.coefficients))
    for point in candidates:
        if len(chosen) == count:
            break
        if outside_span(point.coefficients, normals):
            chosen.append(point)
            normals = orthogonal_complement([v.coefficients] + [c.coefficients for c in chosen], len(v.coefficients))
    return chosen


def _inside(point: LatticePoint, bounds: Sequence[Fraction]) -> bool:
    return all(abs(z) <= b for z, b in zip(point.coordinates, bounds))


def lemma_core_check(
    instance: LemmaInstance,
    companions: Optional[Sequence[LatticePoint]] = None,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> LemmaReport:
    """
    Run the constructive argument on one instance and confirm its conclusion by enumeration.

    Steps: (a) pick v_1..v_(p−1) in P₂ completing v to p independent points (or take
    `companions`); (b) flip signs so v_(i1) ≥ 0 and set v′_i = v_i − ⌊v_(i1)/v_1⌋·v;
    (c) check 0 ≤ v′_(i1) < h_1 and |v′_(ij)| ≤ 2λh_j; (d) check v, v′_1..v′_(p−1) are
    independent; (e) enumerate 2P₃ and check it holds p independent points.

    The floor coefficient satisfies 0 ≤ ⌊v_(i1)/v_1⌋ ≤ λ, with equality possible when λ is an
    integer and v_(i1) = λh_1; the bound on |v′_(ij)| is non-strict for the same reason.

    Raises:
        HypothesisViolation: the instance does not satisfy the hypotheses.
        LemmaViolation: a step of the argument or the enumerated conclusion fails.
    """
    _check_hypotheses(instance)
    lattice, h, lam, p, v = instance.lattice, instance.half_widths, instance.lam, instance.p, instance.v
    p2_bounds = [lam * hi for hi in h]

    if companions is None:
        candidates = enumerate_in_box(lattice, instance.p2(), 1, budget)
        chosen = _independent_completion(v, candidates, p - 1)
    else:
        chosen = list(companions)
        if any(not _inside(point, p2_bounds) for point in chosen):
            _reject(instance, "a companion point lies outside P₂")
    if len(chosen) != p - 1 or rank([v.coefficients] + [c.coefficients for c in chosen]) != p:
        _reject(instance, f"P₂ does not hold {p} independent lattice points including v")

    v1 = v.coordinates[0]
    constructed, floors = [], []
    for point in chosen:
        if point.coordinates[0] < 0:
            point = point.negated()
        k = math.floor(point.coordinates[0] / v1)
        floors.append(k)
        constructed.append(LatticePoint(
            tuple(a - k * b for a, b in zip(point.coefficients, v.coefficients)),
            tuple(z - k * w for z, w in zip(point.coordinates, v.coordinates)),
        ))

    floor_bound = all(0 <= k <= lam for k in floors)
    doubled = [2 * h[0]] + [2 * lam * hj for hj in h[1:]]
    inside = all(
        0 <= point.coordinates[0] < h[0] and _inside(point, doubled)
        and tuple(lattice.coordinates(point.coefficients)) == tuple(point.coordinates)
        for point in constructed
    )
    independent = rank([v.coefficients] + [c.coefficients for c in constructed]) == p
    found = enumerate_in_box(lattice, instance.doubled_p3(), 1, budget)
    confirmed = rank([point.coefficients for point in found]) >= p

    report = LemmaReport(tuple(chosen), tuple(constructed), tuple(floors), floor_bound, inside, independent, confirmed)
    if not report.passed:
        failed = [
            name for name, ok in (
                ("floor bound", floor_bound), ("2P₃ membership", inside),
                ("independence", independent), ("enumeration", confirmed),
            ) if not ok
        ]
        raise LemmaViolation(f"lemma check failed ({', '.join(failed)}) for instance {instance.seed!r}")
    return report


def _random_rational(rng: random.Random, low: Fraction, high: Fraction, max_denominator: int = 8) -> Fraction:
    q = rng.randint(1, max_denominator)
    return Fraction(rng.randint(math.ceil(low * q), math.floor(high * q)), q)


def _permuted(lattice: Lattice, order: Sequence[int]) -> Lattice:
    return Lattice.from_basis([lattice.basis[i] for i in order], lattice.label)


def generate_instance(
    seed: str,
    d: int,
    entry_bound: int = 3,
    denominator_bound: int = 1,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> LemmaInstance:
    """
    Build an instance satisfying the hypotheses by construction.

    A minimal witness w of a random box h puts a point on the boundary of λ_1·B(h); the
    coordinate where w touches is moved first and w's sign fixed so that v_1 = h_1. λ is drawn
    from [1, 4] and doubled until λ·P₁ holds p independent points, p drawn from {2, ..., d}.
    """
    rng = random.Random(seed)
    lattice = random_unimodular_lattice(f"{seed}:lattice", d, entry_bound, denominator_bound)
    h = [_random_rational(rng, Fraction(1, 4), Fraction(4)) for _ in range(d)]
    minima = successive_minima(lattice, Box.from_rationals(h), 1, "auto", budget)
    lambda1 = minima.lambda_1.as_fraction()
    w = minima.witnesses[0]

    touching = next(i for i, (z, hi) in enumerate(zip(w.coordinates, h)) if abs(z) == lambda1 * hi)
    order = [touching] + [i for i in range(d) if i != touching]
    lattice = _permuted(lattice, order)
    half_widths = tuple(lambda1 * h[i] for i in order)
    coordinates = tuple(w.coordinates[i] for i in order)
    v = LatticePoint(w.coefficients, coordinates)
    if coordinates[0] < 0:
        v = v.negated()

    p = rng.randint(2, d)
    lam = _random_rational(rng, Fraction(1), Fraction(4))
    while True:
        box = Box.from_rationals([lam * hi for hi in half_widths])
        points = enumerate_in_box(lattice, box, 1, budget)
        if len(_independent_completion(v, points, p - 1)) == p - 1:
            break
        lam *= 2
    return LemmaInstance(lattice, half_widths, lam, p, v, seed)


@dataclass(frozen=True)
class TrialOutcome:
    seed: str
    outcome: str
    message: str = ""
    instance: Optional[LemmaInstance] = None


def _run_trial(
    seed, dims: Tuple[int, ...], entry_bound: int, denominator_bound: int, budget: Optional[int], trial: int
) -> TrialOutcome:
    trial_seed = f"{seed}:{trial}"
    d = dims[trial % len(dims)]
    instance = generate_instance(trial_seed, d, entry_bound, denominator_bound, budget)
    try:
        lemma_core_check(instance, budget=budget)
    except HypothesisViolation as e:
        return TrialOutcome(trial_seed, "rejected", str(e))
    except LemmaViolation as e:
        return TrialOutcome(trial_seed, "violation", str(e), instance)
    return TrialOutcome(trial_seed, "pass")


@dataclass(frozen=True)
class LemmaSuiteResult:
    trials: int
    passed: int
    rejected: int
    violations: Tuple[TrialOutcome, ...]

    @property
    def summary(self) -> str:
        checked = self.trials - self.rejected
        return f"{self.passed}/{checked} pass"

    def as_dict(self) -> Dict[str, object]:
        return {
            "trials": self.trials,
            "passed_trials": self.passed,
            "rejected": self.rejected,
            "violations": [outcome.seed for outcome in self.violations],
            "summary": self.summary,
        }


@tracer.trace_operation("lemma_trials")
def run_lemma_trials(
    seed,
    trials: int,
    dims: Sequence[int] = (2, 3, 4),
    entry_bound: int = 3,
    denominator_bound: int = 1,
    budget: Optional[int] = DEFAULT_BUDGET,
    workers: int = 1,
) -> LemmaSuiteResult:
    """
    Run `trials` independent instances; trial t uses dimension dims[t mod len(dims)] and the
    seed string "<seed>:<t>", so results do not depend on `workers`.
    """
    if trials < 1:
        raise InputError(f"trials must be positive, got {trials}")
    dims = tuple(dims)
    if not dims or any(d < 2 for d in dims):
        raise InputError(f"dimensions must be at least 2, got {dims}")
    outcomes = map_ordered(
        partial(_run_trial, seed, dims, entry_bound, denominator_bound, budget), range(trials), workers
    )
    for outcome in outcomes:
        metrics.record_lemma_trial(outcome.outcome)
        if outcome.outcome == "rejected":
            logger.debug("Lemma instance rejected", seed=outcome.seed, reason=outcome.message)
    violations = tuple(o for o in outcomes if o.outcome == "violation")
    for outcome in violations:
        logger.error("Lemma violation", seed=outcome.seed, reason=outcome.message)
    return LemmaSuiteResult(
        trials,
        sum(o.outcome == "pass" for o in outcomes),
        sum(o.outcome == "rejected" for o in outcomes),
        violations,
    )
