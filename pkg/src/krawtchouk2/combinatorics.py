"""Exact combinatorics: shifted factorials, multinomials, and the binomial
and trinomial probability laws on the triangular grid.

Everything here is exact rational arithmetic; there are no floating-point
special-function approximations.
"""

from __future__ import annotations

import math
from functools import lru_cache
from fractions import Fraction

from .errors import GridRangeError, ParameterError
from .scalar import Rational, as_rational


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    """n!, memoized for the session (Gram construction reuses these heavily)."""
    if n < 0:
        raise ParameterError("factorial of a negative integer")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def multinomial(n: int, a: int, b: int) -> int:
    """n! / (a! b! (n-a-b)!), the trinomial coefficient."""
    if a < 0 or b < 0 or a + b > n:
        return 0
    return math.comb(n, a) * math.comb(n - a, b)


def pochhammer(a, k: int):
    """Rising factorial a(a+1)...(a+k-1); the empty product for k = 0.

    Computed iteratively with an early exit once a factor hits an exact
    zero, which happens precisely when a is a nonpositive integer and
    k > -a.  The terminating series engines rely on that exact zero.
    """
    if k < 0:
        raise ParameterError("pochhammer index must be nonnegative")
    result = a * 0 + 1
    for step in range(k):
        factor = a + step
        if factor == 0:
            return factor
        result *= factor
    return result


def pochhammer_row(a: int, count: int) -> list:
    """[(a)_0, (a)_1, ..., (a)_count] for integer a, as plain ints."""
    row = [1]
    value = 1
    for step in range(count):
        value *= a + step
        row.append(value)
    return row


def binomial_pmf(x: int, n: int, p) -> Rational:
    """Exact binomial mass binom(n,x) p^x (1-p)^(n-x)."""
    if not 0 <= x <= n:
        raise GridRangeError(f"binomial count {x} outside 0..{n}")
    p = as_rational(p)
    return Fraction(math.comb(n, x)) * p**x * (1 - p) ** (n - x)


def trinomial_pmf(x1: int, x2: int, n: int, p, q) -> Rational:
    """Exact trinomial mass multinom(n;x1,x2) p^x1 q^x2 (1-p-q)^(n-x1-x2).

    The full grid of masses sums to exactly 1.
    """
    p = as_rational(p)
    q = as_rational(q)
    if p < 0 or q < 0 or p + q > 1:
        raise ParameterError(f"invalid probability pair ({p}, {q})")
    if x1 < 0 or x2 < 0 or x1 + x2 > n:
        raise GridRangeError(f"({x1}, {x2}) outside the triangular grid of size {n}")
    return Fraction(multinomial(n, x1, x2)) * p**x1 * q**x2 * (1 - p - q) ** (n - x1 - x2)


def trinomial_term(x1: int, x2: int, n: int, p, q) -> Rational:
    """The trinomial formula evaluated without the probability-range check.

    Dual weights and calibration formulas reuse the algebraic expression at
    parameter points that are not probability pairs.
    """
    if x1 < 0 or x2 < 0 or x1 + x2 > n:
        raise GridRangeError(f"({x1}, {x2}) outside the triangular grid of size {n}")
    p = as_rational(p)
    q = as_rational(q)
    return Fraction(multinomial(n, x1, x2)) * p**x1 * q**x2 * (1 - p - q) ** (n - x1 - x2)


class TriangularGrid:
    """The lattice {(a, b) : a, b >= 0, a + b <= N}.

    Iteration order is total and fixed: lexicographic by (a, b).  The same
    order indexes matrix rows and columns everywhere a grid is flattened.
    """

    def __init__(self, n: int):
        if n < 0:
            raise ParameterError("grid size must be nonnegative")
        self.n = n
        self._points = [(a, b) for a in range(n + 1) for b in range(n + 1 - a)]
        self._index = {pt: i for i, pt in enumerate(self._points)}

    def __iter__(self):
        return iter(self._points)

    def __len__(self) -> int:
        return (self.n + 1) * (self.n + 2) // 2

    def __contains__(self, point) -> bool:
        return point in self._index

    def points(self) -> list[tuple[int, int]]:
        return list(self._points)

    def index(self, point: tuple[int, int]) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise GridRangeError(f"{point} outside the triangular grid of size {self.n}") from None

    def require(self, point: tuple[int, int]) -> tuple[int, int]:
        self.index(point)
        return point
