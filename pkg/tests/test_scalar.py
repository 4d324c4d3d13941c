import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from krawtchouk2 import scalar
from krawtchouk2.errors import FloatOverflowError, MalformedRationalError


def long_division_digits(num: int, den: int, digits: int) -> str:
    """Decimal expansion of num/den to `digits` places by schoolbook division."""
    assert 0 < num < den
    out = []
    remainder = num
    for _ in range(digits):
        remainder *= 10
        out.append(str(remainder // den))
        remainder %= den
    return "0." + "".join(out)


def test_parse_and_format_roundtrip():
    assert scalar.parse_rational("5/18") == Fraction(5, 18)
    assert scalar.parse_rational("3") == Fraction(3)
    assert scalar.parse_rational("3/1") == Fraction(3)
    assert scalar.parse_rational("-7/2") == Fraction(-7, 2)
    assert scalar.format_rational(Fraction(5, 18)) == "5/18"
    assert scalar.format_rational(Fraction(3, 1)) == "3"


@pytest.mark.parametrize("bad", ["", "1/0", "a/b", "1.5.2", "1//2"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(MalformedRationalError):
        scalar.parse_rational(bad)


def test_as_rational_rejects_floats():
    with pytest.raises(MalformedRationalError):
        scalar.as_rational(0.5)


def test_to_float_exact_binary_fraction():
    assert scalar.to_float(Fraction(1, 2)) == 0.5
    assert scalar.to_float(Fraction(0, 1)) == 0.0


def test_to_float_one_third_matches_long_division():
    value = scalar.to_float(Fraction(1, 3))
    oracle = float(long_division_digits(1, 3, 20))
    assert abs(value - oracle) < 1e-15
    # and it is the nearest double: neighbours are strictly worse
    up = math.nextafter(value, 1.0)
    down = math.nextafter(value, 0.0)
    target = Fraction(1, 3)
    assert abs(Fraction(value) - target) <= abs(Fraction(up) - target)
    assert abs(Fraction(value) - target) <= abs(Fraction(down) - target)


def test_to_float_overflow_is_an_error():
    with pytest.raises(FloatOverflowError):
        scalar.to_float(Fraction(10) ** 400)
    with pytest.raises(FloatOverflowError):
        scalar.to_float(-(Fraction(10) ** 400))


def test_from_float_is_exact():
    assert scalar.from_float(0.5) == Fraction(1, 2)
    with pytest.raises(MalformedRationalError):
        scalar.from_float(math.inf)


@given(st.fractions())
def test_float_roundtrip_when_representable(q):
    try:
        value = scalar.to_float(q)
    except FloatOverflowError:
        return
    if scalar.from_float(value) == q:
        # exactly representable: the roundtrip must be the identity
        assert scalar.to_float(scalar.from_float(value)) == value


@given(st.fractions(), st.fractions(), st.fractions())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    if a != 0:
        assert a * (1 / a) == 1


@given(st.fractions())
def test_canonical_form(q):
    assert q.denominator > 0
    assert math.gcd(abs(q.numerator), q.denominator) == 1


def test_float_policy_validation():
    with pytest.raises(MalformedRationalError):
        scalar.FloatPolicy(0.0, 1e-9)
    with pytest.raises(MalformedRationalError):
        scalar.FloatPolicy(1e-9, -1.0)
    policy = scalar.FloatPolicy(1e-9, 1e-9)
    assert policy.close(1.0, 1.0 + 1e-10)
    assert not policy.close(1.0, 1.1)
