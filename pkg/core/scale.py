"""
Exact positive scalars of the form q·ρ^(1/k).

Half-widths of path boxes, minima, event scales and companion scales all live in this
family. Comparisons are exact: a float log test settles clear cases and the rest are
decided by raising both sides to a common integer power.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Union

import mpmath
from sympy import factorint, integer_nthroot

Number = Union[int, Fraction, "ScaleValue"]

_LOG_MARGIN = 1e-9


def _exact_root(value: Fraction, k: int):
    """Return value^(1/k) when it is rational, else None."""
    num, num_exact = integer_nthroot(value.numerator, k)
    if not num_exact:
        return None
    den, den_exact = integer_nthroot(value.denominator, k)
    if not den_exact:
        return None
    return Fraction(int(num), int(den))


def _log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


@total_ordering
@dataclass(frozen=True, eq=False)
class ScaleValue:
    """Positive real coefficient·radicand^(1/degree) with rational coefficient and radicand."""
    coefficient: Fraction
    radicand: Fraction = Fraction(1)
    degree: int = 1

    def __post_init__(self):
        coefficient = Fraction(self.coefficient)
        radicand = Fraction(self.radicand)
        if coefficient <= 0 or radicand <= 0:
            raise ValueError(f"ScaleValue needs positive parts, got {coefficient}, {radicand}")
        if self.degree < 1:
            raise ValueError(f"root degree must be >= 1, got {self.degree}")
        object.__setattr__(self, "coefficient", coefficient)
        object.__setattr__(self, "radicand", radicand)

    @classmethod
    def of(cls, value: Number) -> "ScaleValue":
        if isinstance(value, ScaleValue):
            return value
        return cls(Fraction(value))

    # Canonical form and exact views

    @cached_property
    def canonical(self) -> "ScaleValue":
        """Same value with the smallest possible root degree."""
        radicand, degree = self.radicand, self.degree
        if radicand == 1:
            return ScaleValue(self.coefficient)
        for factor, multiplicity in factorint(degree).items():
            for _ in range(multiplicity):
                root = _exact_root(radicand, factor)
                if root is None:
                    break
                radicand, degree = root, degree // factor
        if degree == 1 or radicand == 1:
            return ScaleValue(self.coefficient * radicand)
        return ScaleValue(self.coefficient, radicand, degree)

    @property
    def is_rational(self) -> bool:
        return self.canonical.degree == 1

    def as_fraction(self) -> Fraction:
        canonical = self.canonical
        if canonical.degree != 1:
            raise ValueError(f"{self!r} is irrational")
        return canonical.coefficient

    def raised(self, power: int = None) -> Fraction:
        """value^power for a multiple `power` of the degree (default: the degree)."""
        power = self.degree if power is None else power
        return self.coefficient ** power * self.radicand ** (power // self.degree)

    # Comparison

    @cached_property
    def _float_log(self) -> float:
        return _log_fraction(self.coefficient) + _log_fraction(self.radicand) / self.degree

    def compare(self, other: Number) -> int:
        other = ScaleValue.of(other)
        a, b = self._float_log, other._float_log
        if abs(a - b) > _LOG_MARGIN * (1.0 + abs(a) + abs(b)):
            return -1 if a < b else 1
        power = math.lcm(self.degree, other.degree)
        left, right = self.raised(power), other.raised(power)
        return (left > right) - (left < right)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            if other <= 0:
                return False
        elif not isinstance(other, ScaleValue):
            return NotImplemented
        return self.compare(other) == 0

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and other <= 0:
            return False
        if not isinstance(other, (int, Fraction, ScaleValue)):
            return NotImplemented
        return self.compare(other) < 0

    def __hash__(self) -> int:
        canonical = self.canonical
        if canonical.degree == 1:
            return hash(canonical.coefficient)
        return hash((canonical.degree, canonical.raised()))

    # Arithmetic

    def __mul__(self, other: Number) -> "ScaleValue":
        if isinstance(other, (int, Fraction)):
            return ScaleValue(self.coefficient * other, self.radicand, self.degree)
        if not isinstance(other, ScaleValue):
            return NotImplemented
        if other.radicand == 1:
            return ScaleValue(self.coefficient * other.coefficient, self.radicand, self.degree)
        if self.radicand == 1:
            return ScaleValue(self.coefficient * other.coefficient, other.radicand, other.degree)
        degree = math.lcm(self.degree, other.degree)
        radicand = self.radicand ** (degree // self.degree) * other.radicand ** (degree // other.degree)
        return ScaleValue(self.coefficient * other.coefficient, radicand, degree)

    __rmul__ = __mul__

    def reciprocal(self) -> "ScaleValue":
        return ScaleValue(1 / self.coefficient, 1 / self.radicand, self.degree)

    def __truediv__(self, other: Number) -> "ScaleValue":
        if isinstance(other, (int, Fraction)):
            return ScaleValue(self.coefficient / other, self.radicand, self.degree)
        if not isinstance(other, ScaleValue):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other: Number) -> "ScaleValue":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self.reciprocal() * other

    def __pow__(self, exponent: int) -> "ScaleValue":
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        return ScaleValue(self.coefficient ** exponent, self.radicand ** exponent, self.degree)

    def root(self, k: int) -> "ScaleValue":
        """Exact k-th root."""
        if k < 1:
            raise ValueError(f"root order must be >= 1, got {k}")
        if k == 1:
            return self
        return ScaleValue(Fraction(1), self.raised(), self.degree * k).canonical

    # Rational bounds and decimals

    def _root_bounds(self, bits: int):
        num, den = self.radicand.numerator, self.radicand.denominator
        k = self.degree
        shift = bits + max(0, (den.bit_length() - num.bit_length()) // k + 2)
        scaled_num = num << (shift * k)
        floor_value = scaled_num // den
        low, _ = integer_nthroot(floor_value, k)
        ceil_value = -(-scaled_num // den)
        high, exact = integer_nthroot(ceil_value, k)
        if not exact:
            high += 1
        return Fraction(int(low), 1 << shift), Fraction(int(high), 1 << shift)

    def lower_bound(self, bits: int = 64) -> Fraction:
        """Rational r ≤ value with relative error about 2^(−bits)."""
        if self.degree == 1 or self.radicand == 1:
            return self.coefficient * self.radicand
        return self.coefficient * self._root_bounds(bits)[0]

    def upper_bound(self, bits: int = 64) -> Fraction:
        """Rational r ≥ value with relative error about 2^(−bits)."""
        if self.degree == 1 or self.radicand == 1:
            return self.coefficient * self.radicand
        return self.coefficient * self._root_bounds(bits)[1]

    def ln(self):
        """Natural logarithm as an mpmath number at the current working precision."""
        return (
            mpmath.log(self.coefficient.numerator) - mpmath.log(self.coefficient.denominator)
            + (mpmath.log(self.radicand.numerator) - mpmath.log(self.radicand.denominator)) / self.degree
        )

    def to_mpf(self):
        return mpmath.exp(self.ln())

    def to_decimal(self, digits: int = 15) -> str:
        with mpmath.workdps(digits + 15):
            return mpmath.nstr(self.to_mpf(), digits)

    def __float__(self) -> float:
        with mpmath.workdps(30):
            return float(self.to_mpf())

    def __repr__(self) -> str:
        if self.radicand == 1:
            return f"ScaleValue({self.coefficient})"
        return f"ScaleValue({self.coefficient}*({self.radicand})^(1/{self.degree}))"
