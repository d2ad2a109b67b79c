from fractions import Fraction

import pytest

from core.errors import ConvergentIndexError, InputError
from core.numbers import (
    IndependenceStatus,
    LiouvilleSeries,
    PeriodicCF,
    RationalValue,
    approximate,
    cf_convergent,
    format_real_spec,
    independence_dimension,
    independence_status,
    parse_real_spec,
    quadratic_field,
)


def test_parse_forms():
    assert parse_real_spec("rat:22/7") == RationalValue(Fraction(22, 7))
    assert parse_real_spec("cf:[1;(1)]") == PeriodicCF((1,), (1,))
    assert parse_real_spec("cf:[0;3,(1,2)]") == PeriodicCF((0, 3), (1, 2))
    assert parse_real_spec("liouville:10") == LiouvilleSeries(10)
    assert parse_real_spec("0.25").value == Fraction(1, 4)


def test_finite_cf_is_rational():
    assert parse_real_spec("cf:[3;7]") == RationalValue(Fraction(22, 7))


@pytest.mark.parametrize("text", ["cf:[1;(0)]", "cf:[1;(", "liouville:1", "rat:1/0", "pi"])
def test_parse_rejects(text):
    with pytest.raises(InputError):
        parse_real_spec(text)


def test_format_round_trips():
    for text in ["rat:22/7", "rat:0.125", "cf:[1;(2)]", "cf:[0;3(1,2)]", "liouville:3"]:
        spec = parse_real_spec(text)
        assert parse_real_spec(format_real_spec(spec)) == spec


def test_convergents():
    golden = parse_real_spec("cf:[1;(1)]")
    assert [cf_convergent(golden, k) for k in range(5)] == [
        Fraction(1), Fraction(2), Fraction(3, 2), Fraction(5, 3), Fraction(8, 5)
    ]
    assert cf_convergent(parse_real_spec("cf:[1;(2)]"), 3) == Fraction(17, 12)


def test_convergent_past_rational_end():
    with pytest.raises(ConvergentIndexError):
        cf_convergent(parse_real_spec("rat:22/7"), 2)
    with pytest.raises(InputError):
        cf_convergent(parse_real_spec("rat:22/7"), -1)


def test_approximate_golden():
    result = approximate(parse_real_spec("cf:[1;(1)]"), Fraction(1, 50))
    assert result.value == Fraction(8, 5)
    assert result.error_bound <= Fraction(1, 50)
    golden = (1 + 5 ** 0.5) / 2
    assert abs(golden - float(result.value)) <= float(result.error_bound)


def test_approximate_liouville():
    result = approximate(parse_real_spec("liouville:10"), Fraction(1, 10 ** 6))
    assert result.value == Fraction(110001, 10 ** 6)
    assert result.error_bound <= Fraction(1, 10 ** 6)


def test_approximate_rational_exact():
    result = approximate(parse_real_spec("rat:1/3"), "1e-9")
    assert result.value == Fraction(1, 3)
    assert result.error_bound == 0


def test_approximate_rejects_nonpositive():
    with pytest.raises(InputError):
        approximate(parse_real_spec("cf:[1;(1)]"), 0)


def test_quadratic_fields():
    assert quadratic_field(parse_real_spec("cf:[1;(1)]")) == 5
    assert quadratic_field(parse_real_spec("cf:[1;(2)]")) == 2
    assert quadratic_field(parse_real_spec("cf:[1;(1,2)]")) == 3


def test_independence():
    golden, sqrt2, sqrt8 = (parse_real_spec(s) for s in ["cf:[1;(1)]", "cf:[1;(2)]", "cf:[2;(1,4)]"])
    assert independence_status([golden]) is IndependenceStatus.VERIFIED
    assert independence_status([parse_real_spec("rat:22/7")]) is IndependenceStatus.FAILED
    assert independence_dimension([golden, sqrt2]) == 3
    # √8 = 2√2 shares the field of √2
    assert independence_dimension([sqrt2, sqrt8]) == 2
    assert independence_status([parse_real_spec("liouville:10")]) is IndependenceStatus.ASSUMED
