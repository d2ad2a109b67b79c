"""
Approximation lattices, weight-vector paths and boxes.

Λ_Θ has basis T_Θ^(−1) = [[E_m, 0], [−Θ, E_n]] and Λ*_Θ has basis T_Θᵀ = [[E_m, Θᵀ], [0, E_n]].
Paths are parametrized by u > 1 with integer weights, so h_i = u^(w_i) is exact.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

import mpmath

from .errors import InputError
from .linalg import Matrix, as_matrix, column, determinant, inverse, mat_vec
from .numbers import Approximation, RealSpec, approximate, parse_real_spec
from .scale import ScaleValue

ScaleLike = Union[int, Fraction, ScaleValue]


@dataclass(frozen=True)
class ThetaSpec:
    """Θ as an n×m array of exact real specs."""
    m: int
    n: int
    entries: Tuple[Tuple[RealSpec, ...], ...]

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise InputError(f"m and n must be positive, got m={self.m}, n={self.n}")
        if len(self.entries) != self.n or any(len(row) != self.m for row in self.entries):
            raise InputError(f"Θ must be {self.n}x{self.m}")

    @property
    def d(self) -> int:
        return self.m + self.n

    @classmethod
    def from_strings(cls, specs: Sequence[str], m: int = 1) -> "ThetaSpec":
        """Row-major spec strings; n = len(specs) / m."""
        if not specs or len(specs) % m:
            raise InputError(f"need a positive multiple of m={m} theta specs, got {len(specs)}")
        parsed = [parse_real_spec(text) for text in specs]
        rows = tuple(tuple(parsed[j * m:(j + 1) * m]) for j in range(len(parsed) // m))
        return cls(m, len(rows), rows)

    def flat_entries(self) -> List[RealSpec]:
        return [entry for row in self.entries for entry in row]

    def approximate(self, faithfulness) -> Tuple[Tuple[Approximation, ...], ...]:
        return tuple(tuple(approximate(entry, faithfulness) for entry in row) for row in self.entries)


@dataclass(frozen=True)
class Lattice:
    """Lattice generated by the columns of `basis`."""
    basis: Matrix
    label: str = "custom"
    theta: Optional[Tuple[Tuple[Fraction, ...], ...]] = field(default=None, compare=False)
    m: int = field(default=0, compare=False)
    n: int = field(default=0, compare=False)

    @classmethod
    def from_basis(cls, rows: Sequence[Sequence], label: str = "custom", require_unimodular: bool = True) -> "Lattice":
        matrix = as_matrix(rows)
        if any(len(row) != len(matrix) for row in matrix):
            raise InputError("lattice basis must be square")
        det = determinant(matrix)
        if det == 0:
            raise InputError("lattice basis is singular")
        if require_unimodular and abs(det) != 1:
            raise InputError(f"lattice basis must be unimodular, det = {det}")
        return cls(matrix, label)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @cached_property
    def inverse(self) -> Matrix:
        return inverse(self.basis)

    @cached_property
    def columns(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(column(self.basis, j) for j in range(self.dimension))

    @property
    def is_structured_primal(self) -> bool:
        return self.label == "primal" and self.m == 1 and self.theta is not None

    def coordinates(self, coefficients: Sequence[int]) -> Tuple[Fraction, ...]:
        return mat_vec(self.basis, coefficients)

    def determinant(self) -> Fraction:
        return determinant(self.basis)


def primal_lattice(theta: ThetaSpec, faithfulness) -> Lattice:
    """Λ_Θ = T_Θ^(−1) Z^d with every θ entry approximated within `faithfulness`."""
    m, n, d = theta.m, theta.n, theta.d
    approx = tuple(tuple(a.value for a in row) for row in theta.approximate(faithfulness))
    rows = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for j in range(n):
        for i in range(m):
            rows[m + j][i] = -approx[j][i]
    return Lattice(as_matrix(rows), "primal", approx, m, n)


def dual_lattice(theta: ThetaSpec, faithfulness) -> Lattice:
    """Λ*_Θ = T_Θᵀ Z^d."""
    m, n, d = theta.m, theta.n, theta.d
    approx = tuple(tuple(a.value for a in row) for row in theta.approximate(faithfulness))
    rows = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for j in range(n):
        for i in range(m):
            rows[i][m + j] = approx[j][i]
    return Lattice(as_matrix(rows), "dual", approx, m, n)


@dataclass(frozen=True)
class PathSpec:
    """Linear path τ_i(s) = w_i·ln(u) with s = c·ln(u)."""
    weights: Tuple[int, ...]
    scale_constant: Fraction
    label: str = "custom"

    def __post_init__(self):
        if len(self.weights) < 2:
            raise InputError("a path needs at least two coordinates")
        if sum(self.weights) != 0:
            raise InputError(f"path weights must sum to zero, got {self.weights}")
        if Fraction(self.scale_constant) <= 0:
            raise InputError("path scale constant must be positive")
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "scale_constant", Fraction(self.scale_constant))

    @classmethod
    def primal(cls, m: int, n: int) -> "PathSpec":
        return cls((n,) * m + (-m,) * n, Fraction(n), "primal")

    @classmethod
    def dual(cls, m: int, n: int) -> "PathSpec":
        return cls((-n,) * m + (m,) * n, Fraction(m), "dual")

    @property
    def dimension(self) -> int:
        return len(self.weights)

    def s_at(self, u: ScaleLike):
        """s = c·ln u at the current mpmath precision."""
        c = self.scale_constant
        return mpmath.mpf(c.numerator) / c.denominator * ScaleValue.of(u).ln()

    def u_at(self, s, digits: int = 12) -> Fraction:
        """Rational u with c·ln u ≈ s, rounded to `digits` significant digits."""
        with mpmath.workdps(digits + 20):
            c = self.scale_constant
            value = mpmath.exp(mpmath.mpf(s) * c.denominator / c.numerator)
            return rationalize(value, digits)


@dataclass(frozen=True)
class Box:
    """Origin-centred box with half-widths h_i."""
    half_widths: Tuple[ScaleValue, ...]

    def __post_init__(self):
        object.__setattr__(self, "half_widths", tuple(ScaleValue.of(h) for h in self.half_widths))

    @classmethod
    def from_rationals(cls, values: Sequence) -> "Box":
        return cls(tuple(ScaleValue(Fraction(v)) for v in values))

    @property
    def dimension(self) -> int:
        return len(self.half_widths)

    def volume_factor(self) -> ScaleValue:
        product = ScaleValue(Fraction(1))
        for h in self.half_widths:
            product = product * h
        return product

    def scaled(self, factor: ScaleLike) -> "Box":
        return Box(tuple(h * factor for h in self.half_widths))


def box_at(path: PathSpec, u: ScaleLike) -> Box:
    """B at parameter u: h_i = u^(w_i), so Π h_i = 1."""
    u = ScaleValue.of(u)
    if u <= 1:
        raise InputError(f"box_at needs u > 1, got {u!r}")
    return Box(tuple(u ** w for w in path.weights))


def rationalize(value, digits: int = 12) -> Fraction:
    """Deterministic rational rounding of an mpmath number to `digits` significant digits."""
    return Fraction(mpmath.nstr(value, digits))


def geometric_grid(u_min: Fraction, u_max: Fraction, count: int) -> List[Fraction]:
    """`count` rational points spaced geometrically over [u_min, u_max], endpoints exact."""
    u_min, u_max = Fraction(u_min), Fraction(u_max)
    if not 1 < u_min < u_max:
        raise InputError(f"need 1 < u_min < u_max, got {u_min}, {u_max}")
    if count < 2:
        return [u_min]
    with mpmath.workdps(40):
        low = mpmath.mpf(u_min.numerator) / u_min.denominator
        ratio = (mpmath.mpf(u_max.numerator) / u_max.denominator) / low
        inner = [rationalize(low * ratio ** (mpmath.mpf(k) / (count - 1))) for k in range(1, count - 1)]
    points = sorted({u_min, u_max, *(u for u in inner if u_min < u < u_max)})
    return points


def required_faithfulness(u_max: ScaleLike, d: int) -> Fraction:
    """Largest θ error trusted for a trace up to u_max: u_max^(−2d)/4."""
    bound = ScaleValue.of(u_max).upper_bound()
    return 1 / (4 * bound ** (2 * d))


def dumps_lattice(lattice: Lattice) -> str:
    """Line-oriented text: `d`, then d rows of `p/q` entries."""
    lines = [str(lattice.dimension)]
    lines += [" ".join(str(x) for x in row) for row in lattice.basis]
    return "\n".join(lines) + "\n"


def loads_lattice(text: str, label: str = "custom") -> Lattice:
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    try:
        d = int(lines[0])
        rows = [[Fraction(x) for x in line.split()] for line in lines[1:1 + d]]
    except (IndexError, ValueError) as e:
        raise InputError(f"malformed lattice text: {e}") from e
    if len(rows) != d or any(len(row) != d for row in rows):
        raise InputError(f"lattice text must hold {d} rows of {d} entries")
    return Lattice.from_basis(rows, label)
