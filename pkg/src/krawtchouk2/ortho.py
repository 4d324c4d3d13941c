"""Inner products, Gram matrices and closed-form norms.

The inner product of two family members is the trinomially weighted sum
over all states,

    I[m; n] = sum over (x1, x2) of b2(x1, x2; N; eta1, eta2) P[m](x) P[n](x),

and the family is orthogonal (the Gram matrix exactly diagonal) precisely
when the three parameter conditions hold.  For orthogonal sets the diagonal
entry has the closed form

    I[m; m] = ( b2(m1, m2; N; eta_bar1, eta_bar2)
                * (1 - eta_bar1 - eta_bar2)^(-N) )^(-1)

in terms of the dual trinomial weights, which is what `norm_closed_form`
computes.  A second, literal product form is kept alongside because it is
only correct up to a sign (-1)^m2; the test suite pins that empirical fact.
"""

from __future__ import annotations

import io
import json
from fractions import Fraction

from .combinatorics import TriangularGrid, multinomial, trinomial_pmf, trinomial_term
from .errors import ParameterError, SingularSystemError
from .hyper import F12Arguments, PolynomialTable, krawtchouk_value
from .params import ParameterSet, dual_weights
from .scalar import Rational, format_rational, to_float


class GramMatrix:
    """Symmetric matrix of inner products over the spectral grid."""

    def __init__(self, n: int, entries: dict):
        self.n = n
        self.grid = TriangularGrid(n)
        self.entries = entries

    def entry(self, m: tuple[int, int], k: tuple[int, int]):
        key = (m, k) if (m, k) in self.entries else (k, m)
        return self.entries[key]

    def off_diagonal_support(self) -> list:
        return [pair for pair, value in self.entries.items()
                if pair[0] != pair[1] and value != 0]

    def is_diagonal(self) -> bool:
        return not self.off_diagonal_support()

    def diagonal(self) -> dict:
        return {m: self.entries[(m, m)] for m in self.grid}

    def labels(self) -> list[str]:
        return [f"{a}_{b}" for (a, b) in self.grid]

    def to_csv(self) -> str:
        out = io.StringIO()
        labels = self.labels()
        points = self.grid.points()
        out.write("," + ",".join(labels) + "\n")
        for m in points:
            row = [format_rational(self.entry(m, k)) for k in points]
            out.write(f"{m[0]}_{m[1]}," + ",".join(row) + "\n")
        return out.getvalue()

    def to_json_dict(self) -> dict:
        points = self.grid.points()
        return {
            "N": self.n,
            "labels": self.labels(),
            "entries": [[format_rational(self.entry(m, k)) for k in points] for m in points],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)


def inner_product(table: PolynomialTable, m: tuple[int, int], n: tuple[int, int]) -> Rational:
    """Exact trinomially weighted inner product of P[m] and P[n]."""
    ps = table.params
    total = Fraction(0)
    for x in table.grid:
        weight = trinomial_pmf(x[0], x[1], table.n, ps.eta1, ps.eta2)
        total += weight * table.value(m, x) * table.value(n, x)
    return total


def generating_check(ps: ParameterSet, n: int, label: tuple[int, int]) -> tuple[Rational, Rational]:
    """(brute force, closed form) for the weighted first moment of P[label].

    The closed form

        (1 - eta1 u1 - eta2 v1)^n1 * (1 - eta1 u2 - eta2 v2)^n2

    holds for every parameter set; under conditions (a), (b) both base
    factors vanish, which is the orthogonality of P[label] against the
    constant member.
    """
    grid = TriangularGrid(n)
    grid.require(label)
    brute = Fraction(0)
    for x in grid:
        args = F12Arguments.from_params(ps, n, label, x)
        brute += trinomial_pmf(x[0], x[1], n, ps.eta1, ps.eta2) * krawtchouk_value(args)
    closed = ((1 - ps.eta1 * ps.u1 - ps.eta2 * ps.v1) ** label[0]
              * (1 - ps.eta1 * ps.u2 - ps.eta2 * ps.v2) ** label[1])
    return brute, closed


def norm_closed_form(ps: ParameterSet, n: int, m: tuple[int, int]) -> Rational:
    """Diagonal Gram entry via the dual-weight normalization factor."""
    if not ps.orthogonal:
        raise ParameterError("closed-form norms require an orthogonal parameter set")
    bar1, bar2 = dual_weights(ps)
    TriangularGrid(n).require(m)
    mass = trinomial_term(m[0], m[1], n, bar1, bar2)
    if mass == 0:
        raise SingularSystemError("dual trinomial mass vanished; normalization undefined")
    return 1 / (mass * (1 - bar1 - bar2) ** (-n))


def norm_product_form(ps: ParameterSet, n: int, m: tuple[int, int]) -> Rational:
    """The literal closed-form product

        (1-v1)^m1 (1-v2)^m2 (u2/u1)^m2
        * ( -eta2 v1 (1 - u1 v2 / (u2 v1)) )^(m1+m2) / multinom(N; m1, m2).

    Equals the true norm times (-1)^m2: correct for even m2, sign-flipped
    for odd m2.  Kept verbatim so the discrepancy stays observable; use
    `norm_closed_form` for the actual norm.
    """
    if ps.u1 == 0 or ps.u2 == 0 or ps.v1 == 0:
        raise ParameterError("product form needs nonzero u1, u2, v1")
    m1, m2 = TriangularGrid(n).require(m)
    core = -ps.eta2 * ps.v1 * (1 - ps.u1 * ps.v2 / (ps.u2 * ps.v1))
    return ((1 - ps.v1) ** m1 * (1 - ps.v2) ** m2 * (ps.u2 / ps.u1) ** m2
            * core ** (m1 + m2) / multinomial(n, m1, m2))


def gram(ps: ParameterSet, n: int, table: PolynomialTable | None = None,
         workers: int | None = None) -> GramMatrix:
    """Full Gram matrix; diagonal with positive diagonal iff ps is orthogonal."""
    if table is None:
        table = PolynomialTable.build(ps, n, workers=workers)
    grid = TriangularGrid(n)
    weights = {x: trinomial_pmf(x[0], x[1], n, ps.eta1, ps.eta2) for x in grid}
    points = grid.points()
    entries: dict = {}
    for a, m in enumerate(points):
        for k in points[a:]:
            total = Fraction(0)
            for x in points:
                total += weights[x] * table.value(m, x) * table.value(k, x)
            entries[(m, k)] = total
            entries[(k, m)] = total
    return GramMatrix(n, entries)


def dual_gram(ps: ParameterSet, n: int, table: PolynomialTable | None = None) -> GramMatrix:
    """Gram matrix of the dual pairing, summing over spectral labels:

        J[x; y] = sum over (m1, m2) of b2(m1, m2; N; eta_bar) P[m](x) P[m](y).

    Exactly diagonal for orthogonal sets with nonsingular dual weights.
    """
    if not ps.orthogonal:
        raise ParameterError("dual orthogonality requires an orthogonal parameter set")
    bar1, bar2 = dual_weights(ps)
    if table is None:
        table = PolynomialTable.build(ps, n)
    grid = TriangularGrid(n)
    points = grid.points()
    weights = {m: trinomial_term(m[0], m[1], n, bar1, bar2) for m in points}
    entries: dict = {}
    for a, x in enumerate(points):
        for y in points[a:]:
            total = Fraction(0)
            for m in points:
                total += weights[m] * table.value(m, x) * table.value(m, y)
            entries[(x, y)] = total
            entries[(y, x)] = total
    return GramMatrix(n, entries)


def gram_float(ps: ParameterSet, n: int) -> list[list[float]]:
    """Floating-point Gram matrix, the fast path for grids too large to
    keep exact.  Entries follow the lexicographic grid order."""
    grid = TriangularGrid(n)
    points = grid.points()
    uf = tuple(to_float(w) for w in ps.weights())
    e1, e2 = to_float(ps.eta1), to_float(ps.eta2)
    values = {}
    for m in points:
        for x in points:
            args = F12Arguments(m[0], m[1], x[0], x[1], n, *uf)
            values[(m, x)] = krawtchouk_value(args)
    weights = {x: to_float(trinomial_pmf(x[0], x[1], n, ps.eta1, ps.eta2)) for x in points}
    out = []
    for m in points:
        out.append([sum(weights[x] * values[(m, x)] * values[(k, x)] for x in points)
                    for k in points])
    return out
