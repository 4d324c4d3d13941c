import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from krawtchouk2 import combinatorics as comb
from krawtchouk2.errors import GridRangeError, ParameterError


def test_pochhammer_examples():
    assert comb.pochhammer(-2, 3) == 0
    assert comb.pochhammer(Fraction(7, 3), 0) == 1
    assert comb.pochhammer(-5, 2) == 20
    assert comb.pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)


@given(st.integers(min_value=0, max_value=40), st.integers(min_value=0, max_value=60))
def test_pochhammer_termination(n, k):
    value = comb.pochhammer(-n, k)
    if k > n:
        assert value == 0
    else:
        assert value != 0


def test_pochhammer_row_matches_scalar():
    row = comb.pochhammer_row(-4, 6)
    assert row == [comb.pochhammer(-4, k) for k in range(7)]


@given(st.integers(min_value=0, max_value=30),
       st.integers(min_value=0, max_value=30),
       st.integers(min_value=0, max_value=30))
def test_multinomial_factorizations(n, a, b):
    value = comb.multinomial(n, a, b)
    if a + b > n:
        assert value == 0
    else:
        assert value == comb.factorial(n) // (comb.factorial(a) * comb.factorial(b) * comb.factorial(n - a - b))
        assert value == comb.binomial(n, a) * comb.binomial(n - a, b)


def test_binomial_pmf_examples():
    assert comb.binomial_pmf(0, 5, Fraction(0)) == 1
    assert comb.binomial_pmf(1, 2, Fraction(1, 2)) == Fraction(1, 2)
    assert comb.binomial_pmf(2, 4, Fraction(1, 3)) == Fraction(8, 27)
    with pytest.raises(GridRangeError):
        comb.binomial_pmf(5, 4, Fraction(1, 2))


def test_trinomial_pmf_examples():
    assert comb.trinomial_pmf(0, 0, 0, Fraction(1, 4), Fraction(1, 3)) == 1
    assert comb.trinomial_pmf(1, 1, 2, Fraction(5, 18), Fraction(5, 7)) == Fraction(25, 63)
    with pytest.raises(ParameterError):
        comb.trinomial_pmf(0, 0, 2, Fraction(2, 3), Fraction(2, 3))
    with pytest.raises(GridRangeError):
        comb.trinomial_pmf(2, 1, 2, Fraction(1, 4), Fraction(1, 4))


def test_trinomial_normalization_exact():
    rng = random.Random(7)
    for n in range(13):
        p = Fraction(rng.randint(0, 6), 12)
        q = Fraction(rng.randint(0, 12 - p.numerator), 12)
        total = sum(comb.trinomial_pmf(a, b, n, p, q) for (a, b) in comb.TriangularGrid(n))
        assert total == 1


def test_grid_cardinality_and_order():
    grid = comb.TriangularGrid(3)
    points = grid.points()
    assert len(grid) == 10
    assert len(points) == 10
    assert points == sorted(points)
    assert points[0] == (0, 0)
    assert points[-1] == (3, 0)
    assert (1, 2) in grid
    assert (2, 2) not in grid
    with pytest.raises(GridRangeError):
        grid.index((2, 2))


def test_grid_rejects_negative_size():
    with pytest.raises(ParameterError):
        comb.TriangularGrid(-1)
