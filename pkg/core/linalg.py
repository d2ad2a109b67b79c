"""
Exact linear algebra over the rationals.

Determinants, inverses and ranks go through sympy; LLL runs in fpylll on an integer
scaling of the basis and only its unimodular transform is kept, so every vector that
leaves this module is still an exact combination of the input.
"""
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

from fpylll import LLL, IntegerMatrix
from sympy import Matrix as SympyMatrix
from sympy import Rational

Vector = List[Fraction]
Matrix = Tuple[Tuple[Fraction, ...], ...]


def dot(v1: Sequence, v2: Sequence):
    return sum(x1 * x2 for x1, x2 in zip(v1, v2))


def sub(v1: Sequence, v2: Sequence) -> list:
    return [x1 - x2 for x1, x2 in zip(v1, v2)]


def scale(v: Sequence, s) -> list:
    return [x * s for x in v]


def identity(d: int) -> List[List[int]]:
    return [[int(i == j) for j in range(d)] for i in range(d)]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    columns = transpose(b)
    return tuple(tuple(dot(row, col) for col in columns) for row in a)


def mat_vec(m: Sequence[Sequence], v: Sequence) -> Tuple:
    return tuple(dot(row, v) for row in m)


def column(m: Sequence[Sequence], j: int) -> Tuple:
    return tuple(row[j] for row in m)


def _sympy(rows: Sequence[Sequence]) -> SympyMatrix:
    return SympyMatrix([[Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows])


def _fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def determinant(m: Sequence[Sequence]) -> Fraction:
    return _fraction(_sympy(m).det())


def inverse(m: Sequence[Sequence]) -> Matrix:
    """Exact inverse; raises ValueError for singular input."""
    matrix = _sympy(m)
    if matrix.det() == 0:
        raise ValueError("matrix is singular")
    inv = matrix.inv()
    return tuple(tuple(_fraction(inv[i, j]) for j in range(inv.cols)) for i in range(inv.rows))


def rank(vectors: Sequence[Sequence]) -> int:
    """Rank of a family of vectors."""
    if not vectors:
        return 0
    return int(_sympy(vectors).rank())


def orthogonal_complement(vectors: Sequence[Sequence], d: int) -> List[Vector]:
    """Basis of the vectors orthogonal to all of `vectors`; x lies in their span iff x is orthogonal to it."""
    if not vectors:
        return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    return [[_fraction(x) for x in normal] for normal in _sympy(vectors).nullspace()]


def outside_span(vector: Sequence, normals: Sequence[Sequence]) -> bool:
    return any(dot(vector, normal) for normal in normals)


def is_integer_matrix(m: Sequence[Sequence]) -> bool:
    return all(Fraction(x).denominator == 1 for row in m for x in row)


def _column_echelon(rows: Sequence[Sequence[int]], d: int) -> Tuple[int, List[List[int]]]:
    """
    Integer column reduction M·U = [A | 0] with U unimodular.
    Returns the rank and U (as rows); the last d − rank columns of U span ker_Z(M).
    """
    m = [list(row) for row in rows]
    u = identity(d)

    def add_column(target: int, source: int, factor: int):
        for row in m:
            row[target] -= factor * row[source]
        for row in u:
            row[target] -= factor * row[source]

    def swap_columns(a: int, b: int):
        for row in m:
            row[a], row[b] = row[b], row[a]
        for row in u:
            row[a], row[b] = row[b], row[a]

    piv = 0
    for row in m:
        if piv == d:
            break
        while True:
            nonzero = [j for j in range(piv, d) if row[j] != 0]
            if not nonzero:
                break
            smallest = min(nonzero, key=lambda j: abs(row[j]))
            if smallest != piv:
                swap_columns(piv, smallest)
            cleared = True
            for j in range(piv + 1, d):
                if row[j] != 0:
                    add_column(j, piv, row[j] // row[piv])
                    cleared = cleared and row[j] == 0
            if cleared:
                break
        if row[piv] != 0:
            piv += 1
    return piv, u


def saturating_basis(vectors: Sequence[Sequence[int]], d: int) -> List[List[int]]:
    """
    Unimodular integer basis (list of d column vectors) whose first r columns span
    span_R(vectors) ∩ Z^d, for r independent integer vectors.
    """
    r = len(vectors)
    if r == 0 or r == d:
        return identity(d)
    rank_w, u_w = _column_echelon(vectors, d)
    kernel = [[u_w[i][j] for i in range(d)] for j in range(rank_w, d)]
    rank_k, u_k = _column_echelon(kernel, d)
    columns = [[u_k[i][j] for i in range(d)] for j in range(d)]
    return columns[rank_k:] + columns[:rank_k]


def _orthogonalize(basis: Sequence[Sequence[Fraction]]) -> Tuple[List[Vector], List[Fraction], List[List[Fraction]]]:
    n = len(basis)
    ortho: List[Vector] = []
    norms: List[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i, vec in enumerate(basis):
        v = [Fraction(x) for x in vec]
        for j in range(i):
            mu[i][j] = dot(basis[i], ortho[j]) / norms[j]
            v = sub(v, scale(ortho[j], mu[i][j]))
        ortho.append(v)
        norms.append(dot(v, v))
    return ortho, norms, mu


def gram_schmidt(basis: Sequence[Sequence[Fraction]]) -> Tuple[List[Fraction], List[List[Fraction]]]:
    """
    Gram–Schmidt data of a list of vectors.

    Returns:
        (squared norms of b*_i, mu) with b_i = b*_i + Σ_{j<i} mu[i][j] b*_j
    """
    _, norms, mu = _orthogonalize(basis)
    return norms, mu


def lll_transform(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    """
    Unimodular U with U·rows LLL-reduced.

    The rows are brought to a common denominator and reduced as an fpylll IntegerMatrix.
    """
    denominator = math.lcm(*(Fraction(x).denominator for row in rows for x in row))
    scaled = [[int(Fraction(x) * denominator) for x in row] for row in rows]
    A = IntegerMatrix.from_matrix(scaled)
    U = IntegerMatrix.identity(A.nrows)
    LLL.reduction(A, U)
    return [[int(U[i, j]) for j in range(U.ncols)] for i in range(U.nrows)]


def _apply(u: Sequence[Sequence[int]], rows: Sequence[Sequence]) -> List[list]:
    return [[sum(a * row[j] for a, row in zip(coeffs, rows) if a) for j in range(len(rows[0]))] for coeffs in u]


def lll_reduce(basis: List[Vector], transform: List[List[int]], fixed: int = 0) -> None:
    """
    In-place reduction of `basis` that keeps span(basis[:fixed]).

    basis[:fixed] is LLL-reduced on its own; basis[fixed:] is replaced by the combination
    whose projection orthogonal to the prefix is LLL-reduced, then size-reduced against
    the prefix. `transform[i]` receives the same integer row operations as basis[i].
    """
    n = len(basis)
    blocks = [(0, fixed), (fixed, n)] if fixed else [(0, n)]
    for start, stop in blocks:
        if stop - start < 1:
            continue
        if start:
            # projection of each suffix vector orthogonal to span(basis[:start])
            prefix, _, _ = _orthogonalize(basis[:start])
            rows = []
            for vec in basis[start:stop]:
                v = [Fraction(x) for x in vec]
                for w in prefix:
                    v = sub(v, scale(w, dot(vec, w) / dot(w, w)))
                rows.append(v)
        else:
            rows = basis[start:stop]
        u = lll_transform(rows)
        basis[start:stop] = _apply(u, basis[start:stop])
        transform[start:stop] = _apply(u, transform[start:stop])

    if fixed and fixed < n:
        _, mu = gram_schmidt(basis)
        for k in range(fixed, n):
            for j in reversed(range(fixed)):
                q = round(mu[k][j])
                if q:
                    basis[k] = sub(basis[k], scale(basis[j], q))
                    transform[k] = [a - q * b for a, b in zip(transform[k], transform[j])]
                    for i in range(j):
                        mu[k][i] -= q * mu[j][i]
                    mu[k][j] -= q
