from fractions import Fraction

import mpmath
import pytest

from core.scale import ScaleValue


def test_exact_roots_collapse():
    assert ScaleValue(1, 4, 2) == 2
    assert ScaleValue(1, 4, 2).is_rational
    assert ScaleValue(3, Fraction(8, 27), 3).as_fraction() == 2
    assert ScaleValue(1, 16, 6).canonical == ScaleValue(1, 4, 3)
    assert ScaleValue(1, 16, 6).canonical.degree == 3


@pytest.mark.parametrize(
    "radicand, degree, radicand_out, degree_out",
    [(16, 12, 2, 3), (64, 12, 2, 2), (4096, 12, 2, 1), (Fraction(81, 16), 8, Fraction(3, 2), 2)],
)
def test_canonical_with_repeated_prime_factors(radicand, degree, radicand_out, degree_out):
    canonical = ScaleValue(1, radicand, degree).canonical
    assert canonical.degree == degree_out
    assert canonical == ScaleValue(1, radicand_out, degree_out)


def test_irrational_compare():
    root2 = ScaleValue(1, 2, 2)
    assert not root2.is_rational
    assert Fraction(141, 100) < root2 < Fraction(142, 100)
    assert root2 * root2 == 2
    assert ScaleValue(1, 2, 3) < ScaleValue(1, 2, 2)
    with pytest.raises(ValueError):
        root2.as_fraction()


def test_close_values_compare_exactly():
    # logs agree inside the float margin, the exact branch decides
    cube = ScaleValue(1, 10, 3)
    near = Fraction(2154434690031883721, 10 ** 18)
    assert (cube < near) == (near ** 3 > 10)
    assert cube != near


def test_arithmetic():
    a = ScaleValue(2, 3, 2)
    b = ScaleValue(Fraction(1, 2), 9, 4)
    assert a / b == 4
    assert (a ** 2) == 12
    assert (a ** -2) == Fraction(1, 12)
    assert 1 / a == a.reciprocal()
    assert a.root(2) ** 4 == 12


def test_hash_follows_value():
    assert hash(ScaleValue(1, 4, 2)) == hash(ScaleValue(2))
    assert len({ScaleValue(1, 9, 2), ScaleValue(3), ScaleValue(1, 27, 3)}) == 1


def test_bounds_bracket():
    value = ScaleValue(5, 7, 5)
    low, high = value.lower_bound(), value.upper_bound()
    assert low <= high
    assert low ** 5 <= 5 ** 5 * 7 <= high ** 5
    assert high - low < Fraction(1, 2 ** 50)


def test_ln_and_decimal():
    value = ScaleValue(1, 2, 2)
    with mpmath.workdps(30):
        assert abs(value.ln() - mpmath.log(2) / 2) < mpmath.mpf(10) ** -25
    assert value.to_decimal(6) == "1.41421"


def test_rejects_nonpositive():
    with pytest.raises(ValueError):
        ScaleValue(0)
    with pytest.raises(ValueError):
        ScaleValue(1, -2, 3)
    assert ScaleValue(1) != 0
    assert not ScaleValue(1) < -1
