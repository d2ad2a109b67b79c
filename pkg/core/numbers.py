"""
Exact real numbers for the entries of Θ.
Every consumer gets a rational approximant together with an explicit error bound.
"""
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import chain, cycle
from math import factorial
from typing import Iterator, Optional, Sequence, Tuple, Union

import mpmath
from sympy import factorint

from .errors import ConvergentIndexError, InputError

Rational = Fraction


@dataclass(frozen=True)
class RationalValue:
    """A rational θ; `literal` keeps the decimal string it was parsed from, if any."""
    value: Fraction
    literal: Optional[str] = None


@dataclass(frozen=True)
class PeriodicCF:
    """Eventually periodic continued fraction [a0; a1, ..., (p1, ..., pk)]."""
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise InputError("periodic continued fraction needs a nonempty period")
        if any(a < 1 for a in self.preperiod[1:]) or any(a < 1 for a in self.period):
            raise InputError(
                "partial quotients after the first must be >= 1",
                {"preperiod": self.preperiod, "period": self.period},
            )


@dataclass(frozen=True)
class LiouvilleSeries:
    """θ = Σ_{k≥1} base^(−k!)."""
    base: int

    def __post_init__(self):
        if self.base < 2:
            raise InputError(f"Liouville base must be >= 2, got {self.base}")


RealSpec = Union[RationalValue, PeriodicCF, LiouvilleSeries]


@dataclass(frozen=True)
class Approximation:
    """Rational approximant r with |θ − r| ≤ error_bound."""
    value: Fraction
    error_bound: Fraction
    method: str
    index: int


class IndependenceStatus(str, Enum):
    """Status of the linear independence of (1, θ_1, ..., θ_n) over Q."""
    VERIFIED = "verified"
    ASSUMED = "assumed"
    FAILED = "failed"


_CF_PATTERN = re.compile(r"^cf:\[\s*(-?\d+)\s*(?:;\s*([^\]]*))?\]$")
_CF_TAIL_PATTERN = re.compile(r"^([\d,\s]*?)\s*(?:\(([\d,\s]+)\))?\s*$")


def _int_list(text: str) -> Tuple[int, ...]:
    items = [item.strip() for item in text.split(",")]
    return tuple(int(item) for item in items if item)


def parse_real_spec(text: str) -> RealSpec:
    """
    Parse a θ spec string.

    Accepted forms: `rat:<p>/<q>`, `rat:<decimal>`, `cf:[a0;a1,...(p1,...)]`,
    `liouville:<base>`, or a bare decimal/fraction literal.

    Args:
        text: The θ text, e.g. `cf:[1;(2)]`

    Returns:
        The parsed RealSpec
    """
    raw = text.strip()
    try:
        if raw.startswith("rat:"):
            body = raw[4:].strip()
            literal = body if any(ch in body for ch in ".eE") else None
            return RationalValue(Fraction(body), literal)

        if raw.startswith("cf:"):
            match = _CF_PATTERN.match(raw)
            if not match:
                raise InputError(f"malformed continued fraction spec: {text!r}")
            a0 = int(match.group(1))
            tail = match.group(2) or ""
            tail_match = _CF_TAIL_PATTERN.match(tail)
            if not tail_match:
                raise InputError(f"malformed continued fraction tail: {text!r}")
            head = (a0,) + _int_list(tail_match.group(1))
            if tail_match.group(2) is None:
                if any(a < 1 for a in head[1:]):
                    raise InputError("partial quotients after the first must be >= 1")
                return RationalValue(finite_cf_value(head))
            return PeriodicCF(head, _int_list(tail_match.group(2)))

        if raw.startswith("liouville:"):
            return LiouvilleSeries(int(raw[len("liouville:"):].strip()))

        return RationalValue(Fraction(raw), raw)
    except InputError:
        raise
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"cannot parse real spec {text!r}: {e}") from e


def format_real_spec(spec: RealSpec) -> str:
    """Canonical spec string; round-trips everything parse_real_spec produces."""
    if isinstance(spec, RationalValue):
        return f"rat:{spec.literal}" if spec.literal else f"rat:{spec.value}"
    if isinstance(spec, PeriodicCF):
        if not spec.preperiod:
            rotated = spec.period[1:] + spec.period[:1]
            return f"cf:[{spec.period[0]};({','.join(str(a) for a in rotated)})]"
        head = ",".join(str(a) for a in spec.preperiod[1:])
        period = ",".join(str(a) for a in spec.period)
        return f"cf:[{spec.preperiod[0]};{head}({period})]"
    return f"liouville:{spec.base}"


def finite_cf_value(quotients: Sequence[int]) -> Fraction:
    value = Fraction(quotients[-1])
    for a in reversed(quotients[:-1]):
        value = a + 1 / value
    return value


def partial_quotients(spec: RealSpec) -> Iterator[int]:
    """Partial quotients a_0, a_1, ... (finite for rationals)."""
    if isinstance(spec, RationalValue):
        num, den = spec.value.numerator, spec.value.denominator
        while den:
            a, r = divmod(num, den)
            yield a
            num, den = den, r
    elif isinstance(spec, PeriodicCF):
        yield from chain(spec.preperiod, cycle(spec.period))
    else:
        raise InputError("Liouville series have no continued fraction expansion here")


def convergents(spec: RealSpec) -> Iterator[Tuple[int, int]]:
    """Yield (p_k, q_k) via p_k = a_k p_{k−1} + p_{k−2}."""
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for a in partial_quotients(spec):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q


def cf_convergent(spec: RealSpec, k: int) -> Fraction:
    """Return the k-th convergent p_k/q_k in lowest terms."""
    if k < 0:
        raise InputError(f"convergent index must be >= 0, got {k}")
    for index, (p, q) in enumerate(convergents(spec)):
        if index == k:
            return Fraction(p, q)
    raise ConvergentIndexError(f"convergent index {k} is past the end of a finite continued fraction")


def _approximate_cf(spec: PeriodicCF, eps: Fraction) -> Approximation:
    # Go deep enough that the deepest convergent pins θ to within eps/64, then pick
    # the shallowest convergent whose certified error is within eps.
    table = []
    stream = convergents(spec)
    p, q = next(stream)
    for p_next, q_next in stream:
        table.append((p, q, Fraction(1, q * q_next)))
        if table[-1][2] <= eps / 64:
            break
        p, q = p_next, q_next

    p_deep, q_deep, tail = table[-1]
    deep = Fraction(p_deep, q_deep)
    for index, (p, q, _) in enumerate(table):
        bound = abs(Fraction(p, q) - deep) + tail
        if bound <= eps:
            return Approximation(Fraction(p, q), bound, "convergent", index)
    return Approximation(deep, tail, "convergent", len(table) - 1)


def _approximate_liouville(spec: LiouvilleSeries, eps: Fraction) -> Approximation:
    base = spec.base
    value = Fraction(0)
    k = 1
    while True:
        term = Fraction(1, base ** factorial(k))
        if term * Fraction(base, base - 1) <= eps:
            return Approximation(value, term * Fraction(base, base - 1), "partial_sum", k - 1)
        value += term
        k += 1


def approximate(spec: RealSpec, eps) -> Approximation:
    """
    Rational approximant within eps.

    Args:
        spec: The real number
        eps: Positive error allowance (Fraction, int or exact decimal string)

    Returns:
        Approximation carrying the value and the bound it was certified with
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError(f"approximation tolerance must be positive, got {eps}")
    if isinstance(spec, RationalValue):
        return Approximation(spec.value, Fraction(0), "exact", 0)
    if isinstance(spec, PeriodicCF):
        return _approximate_cf(spec, eps)
    return _approximate_liouville(spec, eps)


def to_mpf(spec: RealSpec, dps: int = 40):
    """High-precision decimal value for reporting."""
    with mpmath.workdps(dps + 10):
        r = approximate(spec, Fraction(1, 10 ** (dps + 5))).value
        return mpmath.mpf(r.numerator) / r.denominator


def _squarefree_part(value: int) -> int:
    part = 1
    for prime, exponent in factorint(value).items():
        if exponent % 2:
            part *= prime
    return part


def quadratic_field(spec: PeriodicCF) -> int:
    """
    Squarefree D > 1 with θ ∈ Q(√D).

    The purely periodic tail y = [(p_1, ..., p_k)] solves
    q_{k−1} y² + (q_{k−2} − p_{k−1}) y − p_{k−2} = 0, and θ is a rational
    Möbius image of y, so both share the field of the discriminant.
    """
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for a in spec.period:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    discriminant = (q_prev - p) ** 2 + 4 * q * p_prev
    return _squarefree_part(discriminant)


def independence_dimension(entries: Sequence[RealSpec]) -> Optional[int]:
    """dim_Q span(1, θ_1, ..., θ_n), or None when it cannot be decided exactly."""
    if any(isinstance(entry, LiouvilleSeries) for entry in entries):
        return None
    fields = {quadratic_field(entry) for entry in entries if isinstance(entry, PeriodicCF)}
    return 1 + len(fields)


def independence_status(entries: Sequence[RealSpec]) -> IndependenceStatus:
    dimension = independence_dimension(entries)
    if dimension is None:
        return IndependenceStatus.ASSUMED
    if dimension == len(entries) + 1:
        return IndependenceStatus.VERIFIED
    return IndependenceStatus.FAILED
