"""The five-term recurrence in the spectral labels and its coefficient algebra.

With S = p1+p2+p3+p4 and Delta = p1*p4 - p2*p3 != 0, the coefficients

    cA = p1 p3 (p2+p4) S / ((p1+p3) Delta)
    cB = p2 p4 (p1+p3) S / ((p2+p4) Delta)
    cC = Delta / (p1+p3)
    cD = Delta / (p2+p4)

satisfy the exact relation, for every grid pair (m, x),

    (N-m1-m2) * ( cA (P[m1+1,m2] - P) - cB (P[m1,m2+1] - P) )
      + m1 cC (P[m1-1,m2] - P) - m2 cD (P[m1,m2-1] - P)
      = ( (p1+p2) x1 - (p3+p4) x2 ) * P[m1,m2](x1,x2).

Terms whose multiplier vanishes (m1 = 0, m2 = 0, or m1+m2 = N) are skipped
before any neighbor lookup, so out-of-grid labels are never touched.

The module also evaluates the first-order "weighted Euler operator" residual

    -p4 u1 dP/du1 + p2 v1 dP/dv1 - p3 u2 dP/du2 + p1 v2 dP/dv2

term-wise and exactly.  Contrary to what a formal derivation of the
recurrence suggests, this residual is NOT zero for parametrized sets (see
`weighted_euler_residual`); the coefficient identities that actually drive
the recurrence are the six in `coefficient_residuals` and
`cross_coefficient_residuals`, and those are exactly zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import DeltaZeroError, GridRangeError
from .hyper import F12Arguments, PolynomialTable, krawtchouk_partials
from .params import ParameterSet, PQuadruple, from_p
from .scalar import Rational, format_rational


@dataclass(frozen=True)
class RecurrenceCoefficients:
    cA: Rational
    cB: Rational
    cC: Rational
    cD: Rational


def coefficients(p: PQuadruple) -> RecurrenceCoefficients:
    """The four coefficients; rejects Delta = 0, where they genuinely diverge."""
    delta = p.delta
    if delta == 0:
        quad = ",".join(format_rational(v) for v in p.as_tuple())
        raise DeltaZeroError(f"p1*p4 - p2*p3 = 0 for ({quad}); recurrence undefined")
    p1, p2, p3, p4 = p.as_tuple()
    total = p.total
    coeffs = RecurrenceCoefficients(
        cA=p1 * p3 * (p2 + p4) * total / ((p1 + p3) * delta),
        cB=p2 * p4 * (p1 + p3) * total / ((p2 + p4) * delta),
        cC=delta / (p1 + p3),
        cD=delta / (p2 + p4),
    )
    ps = from_p(p)
    assert coeffs.cB * ps.u2 - coeffs.cA * ps.u1 == p1 + p2
    assert coeffs.cB * ps.v2 - coeffs.cA * ps.v1 == -(p3 + p4)
    return coeffs


def coefficient_residuals(p: PQuadruple) -> tuple[Rational, Rational]:
    """Residuals of cB*u2 - cA*u1 = p1+p2 and cB*v2 - cA*v1 = -(p3+p4)."""
    coeffs = coefficients(p)
    ps = from_p(p)
    p1, p2, p3, p4 = p.as_tuple()
    return (
        coeffs.cB * ps.u2 - coeffs.cA * ps.u1 - (p1 + p2),
        coeffs.cB * ps.v2 - coeffs.cA * ps.v1 + (p3 + p4),
    )


def cross_coefficient_residuals(p: PQuadruple) -> tuple[Rational, Rational, Rational, Rational]:
    """Residuals of the four cross identities

        p4 u1 = cB u2 (1-u1),   p2 v1 = -cB v2 (1-v1),
        p3 u2 = -cA u1 (1-u2),  p1 v2 = cA v1 (1-v2).

    These are the exact mechanism behind the recurrence: they make the
    derivative terms of the shift operators cancel coefficient-wise.  They
    hold only on the parametrized locus.
    """
    coeffs = coefficients(p)
    ps = from_p(p)
    p1, p2, p3, p4 = p.as_tuple()
    return (
        p4 * ps.u1 - coeffs.cB * ps.u2 * (1 - ps.u1),
        p2 * ps.v1 + coeffs.cB * ps.v2 * (1 - ps.v1),
        p3 * ps.u2 + coeffs.cA * ps.u1 * (1 - ps.u2),
        p1 * ps.v2 - coeffs.cA * ps.v1 * (1 - ps.v2),
    )


def apply_recurrence(table: PolynomialTable, p: PQuadruple,
                     m: tuple[int, int], x: tuple[int, int]) -> tuple[Rational, Rational]:
    """(LHS, RHS) of the five-term relation at one grid pair; equality is the theorem."""
    coeffs = coefficients(p)
    n = table.n
    m1, m2 = table.grid.require(m)
    table.grid.require(x)
    center = table.value(m, x)
    lhs = Fraction(0)
    if m1 + m2 < n:
        up1 = table.value((m1 + 1, m2), x)
        up2 = table.value((m1, m2 + 1), x)
        lhs += (n - m1 - m2) * (coeffs.cA * (up1 - center) - coeffs.cB * (up2 - center))
    if m1 > 0:
        lhs += m1 * coeffs.cC * (table.value((m1 - 1, m2), x) - center)
    if m2 > 0:
        lhs -= m2 * coeffs.cD * (table.value((m1, m2 - 1), x) - center)
    p1, p2, p3, p4 = p.as_tuple()
    rhs = ((p1 + p2) * x[0] - (p3 + p4) * x[1]) * center
    return lhs, rhs


@dataclass
class GridReport:
    """Outcome of an exhaustive grid verification."""

    n: int
    p: PQuadruple | None
    pairs_checked: int
    failures: list

    @property
    def failed(self) -> int:
        return len(self.failures)

    def to_json_dict(self) -> dict:
        return {
            "N": self.n,
            "p": None if self.p is None else self.p.to_json_dict(),
            "pairs_checked": self.pairs_checked,
            "failures": [
                {
                    "m": list(item["m"]),
                    "x": list(item["x"]),
                    "lhs": format_rational(item["lhs"]),
                    "rhs": format_rational(item["rhs"]),
                }
                for item in self.failures
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)


def verify_recurrence_grid(p: PQuadruple, n: int,
                           table: PolynomialTable | None = None) -> GridReport:
    """Check the five-term relation at every (m, x) grid pair."""
    if table is None:
        table = PolynomialTable.build(from_p(p), n)
    checked = 0
    failures = []
    for m in table.grid:
        for x in table.grid:
            lhs, rhs = apply_recurrence(table, p, m, x)
            checked += 1
            if lhs != rhs:
                failures.append({"m": m, "x": x, "lhs": lhs, "rhs": rhs})
    return GridReport(n=n, p=p, pairs_checked=checked, failures=failures)


def weighted_euler_residual(p: PQuadruple, m: tuple[int, int], x: tuple[int, int],
                            n: int, params: ParameterSet | None = None) -> Rational:
    """Exact residual of the first-order operator

        ( -p4 u1 d/du1 + p2 v1 d/dv1 - p3 u2 d/du2 + p1 v2 d/dv2 ) P[m](x)

    with the weights taken at the parametrized point and the partial
    derivatives computed term-wise.  A formal derivation of the recurrence
    asserts this vanishes on parametrized sets; the exact computation shows
    it generally does not (the derivation drops cross terms of the exact
    chain rule).  The residual is exposed unmodified so the discrepancy is
    machine-checkable; `cross_coefficient_residuals` carries the corrected,
    actually-zero form of the same mechanism.
    """
    ps = params if params is not None else from_p(p)
    args = F12Arguments.from_params(ps, n, m, x)
    du1, dv1, du2, dv2 = krawtchouk_partials(args)
    p1, p2, p3, p4 = p.as_tuple()
    return -p4 * ps.u1 * du1 + p2 * ps.v1 * dv1 - p3 * ps.u2 * du2 + p1 * ps.v2 * dv2


def verify_euler_identity_grid(p: PQuadruple, n: int,
                               params: ParameterSet | None = None) -> GridReport:
    """Evaluate the weighted Euler residual at every grid pair.

    Failures carry the residual in the "lhs" slot with "rhs" zero.
    """
    ps = params if params is not None else from_p(p)
    from .combinatorics import TriangularGrid

    grid = TriangularGrid(n)
    checked = 0
    failures = []
    for m in grid:
        for x in grid:
            residual = weighted_euler_residual(p, m, x, n, params=ps)
            checked += 1
            if residual != 0:
                failures.append({"m": m, "x": x, "lhs": residual, "rhs": Fraction(0)})
    return GridReport(n=n, p=p, pairs_checked=checked, failures=failures)
