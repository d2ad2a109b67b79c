from fractions import Fraction
from math import gcd

import pytest

from core.linalg import (
    determinant,
    dot,
    gram_schmidt,
    inverse,
    lll_reduce,
    lll_transform,
    mat_mul,
    orthogonal_complement,
    outside_span,
    rank,
    saturating_basis,
)


def test_determinant_and_inverse():
    m = [[2, 1], [Fraction(1, 3), 1]]
    assert determinant(m) == Fraction(5, 3)
    assert isinstance(determinant(m), Fraction)
    assert mat_mul(m, inverse(m)) == ((1, 0), (0, 1))
    assert determinant([[1, 2], [2, 4]]) == 0
    with pytest.raises(ValueError):
        inverse([[1, 2], [2, 4]])


def test_rank():
    assert rank([]) == 0
    assert rank([[1, 2, 3], [2, 4, 6]]) == 1
    assert rank([[1, 0, 0], [0, 0, 1], [1, 0, 1]]) == 2
    assert rank([[Fraction(1, 3), 1], [1, 3]]) == 1


@pytest.mark.parametrize("vectors", [[[2, 2, 0]], [[1, 2, 3], [0, 3, 6]], [[0, 0, 5, 0]]])
def test_saturating_basis(vectors):
    d = len(vectors[0])
    columns = saturating_basis(vectors, d)
    assert abs(determinant(columns)) == 1
    head = columns[: len(vectors)]
    assert rank(head + vectors) == len(vectors)
    for column in head:
        assert gcd(*column) == 1


def test_lll_transform_is_unimodular():
    rows = [[Fraction(1), Fraction(0)], [Fraction(100), Fraction(1, 3)]]
    u = lll_transform(rows)
    assert abs(determinant(u)) == 1
    reduced = mat_mul(u, rows)
    assert sorted(dot(row, row) for row in reduced) == [Fraction(1, 9), 1]


def test_lll_reduces_shear():
    basis = [[Fraction(1), Fraction(0)], [Fraction(100), Fraction(1)]]
    transform = [[1, 0], [0, 1]]
    lll_reduce(basis, transform)
    assert sorted(dot(row, row) for row in basis) == [1, 1]
    assert abs(determinant(transform)) == 1
    assert [list(row) for row in mat_mul(transform, [[1, 0], [100, 1]])] == basis


def test_lll_keeps_prefix_span():
    original = [[Fraction(3), Fraction(1), Fraction(0)], [Fraction(7), Fraction(3), Fraction(1)], [Fraction(50), Fraction(1), Fraction(9)]]
    basis = [list(row) for row in original]
    transform = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    lll_reduce(basis, transform, fixed=1)
    assert basis[0] in ([3, 1, 0], [-3, -1, 0])
    assert [list(row) for row in mat_mul(transform, original)] == basis
    assert abs(determinant(transform)) == 1
    _, mu = gram_schmidt(basis)
    assert all(abs(mu[k][0]) <= Fraction(1, 2) for k in (1, 2))


def test_orthogonal_complement_decides_span():
    normals = orthogonal_complement([[1, 0, 1], [0, 1, 0]], 3)
    assert len(normals) == 1
    assert not outside_span([2, 5, 2], normals)
    assert outside_span([1, 0, 0], normals)
    assert len(orthogonal_complement([], 2)) == 2
    assert outside_span([0, 1], orthogonal_complement([], 2))
    assert not outside_span([0, 0], orthogonal_complement([], 2))
