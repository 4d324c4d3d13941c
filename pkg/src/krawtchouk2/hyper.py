"""Series engines for the terminating Gauss, Appell and double-Appell
hypergeometric sums, their transformation identities, and quadrature checks
of the classical integral representations.

The central object is the two-variable polynomial

    P[m1,m2](x1,x2) = sum over i,j,k,l >= 0 of
        (-m1)_(i+j) (-m2)_(k+l) (-x1)_(i+k) (-x2)_(j+l)
        / ( i! j! k! l! (-N)_(i+j+k+l) ) * u1^i v1^j u2^k v2^l

where every index window is finite because the shifted factorials of
nonpositive integers terminate.  Terms killed by termination are skipped,
never computed.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import TriangularGrid, factorial, pochhammer, pochhammer_row
from .errors import (
    BottomZeroError,
    ConvergenceError,
    GridRangeError,
    NonTerminatingError,
    ParameterError,
)
from .params import ParameterSet
from .scalar import DEFAULT_POLICY, FloatPolicy, Rational, as_rational, format_rational


def _nonpositive_int_bound(a):
    """-a when a is a nonpositive integer (series cap), else None."""
    if isinstance(a, int):
        return -a if a <= 0 else None
    if isinstance(a, Fraction) and a.denominator == 1 and a <= 0:
        return int(-a)
    return None


def _powers(base, count: int) -> list:
    row = [base * 0 + 1]
    for _ in range(count):
        row.append(row[-1] * base)
    return row


# ---------------------------------------------------------------------------
# terminating Gauss series
# ---------------------------------------------------------------------------

def gauss_2f1_terminating(a_top1, a_top2, bottom, z, term_count: int | None = None):
    """Exact value of 2F1(a1, a2; c; z) = sum_k (a1)_k (a2)_k z^k / ((c)_k k!).

    At least one top parameter must be a nonpositive integer; term_count
    may cap the summation index further.  A bottom Pochhammer reaching zero
    while the running numerator is still nonzero is an error, not a skip.
    """
    a1, a2, c = as_rational(a_top1), as_rational(a_top2), as_rational(bottom)
    z = z if isinstance(z, float) else as_rational(z)
    caps = [b for b in (_nonpositive_int_bound(a1), _nonpositive_int_bound(a2)) if b is not None]
    if not caps:
        raise NonTerminatingError("neither top parameter is a nonpositive integer")
    cap = min(caps)
    if term_count is not None:
        cap = min(cap, term_count)
    total = z * 0 + 1  # k = 0 term, in the arithmetic of z
    num = Fraction(1)
    den = Fraction(1)
    zp = total * 1
    for k in range(1, cap + 1):
        num *= (a1 + k - 1) * (a2 + k - 1)
        if num == 0:
            break
        bottom_factor = c + k - 1
        if bottom_factor == 0:
            raise BottomZeroError(f"bottom parameter {c} hits zero at k = {k} before termination")
        den *= bottom_factor * k
        zp = zp * z
        total += num / den * zp
    return total


# ---------------------------------------------------------------------------
# the double-Appell series with general parameters
# ---------------------------------------------------------------------------

def f12_series(a1, a2, b1, b2, c, w1, w2, w3, w4):
    """The quadruple sum

        sum (a1)_(i+j) (a2)_(k+l) (b1)_(i+k) (b2)_(j+l)
            / ( i! j! k! l! (c)_(i+j+k+l) ) * w1^i w2^j w3^k w4^l

    evaluated exactly.  Termination must bound every index: either both a's
    or both b's are nonpositive integers.
    """
    a1, a2, b1, b2, c = (as_rational(t) for t in (a1, a2, b1, b2, c))
    cap_a1 = _nonpositive_int_bound(a1)
    cap_a2 = _nonpositive_int_bound(a2)
    cap_b1 = _nonpositive_int_bound(b1)
    cap_b2 = _nonpositive_int_bound(b2)
    if not ((cap_a1 is not None and cap_a2 is not None) or (cap_b1 is not None and cap_b2 is not None)):
        raise NonTerminatingError("series does not terminate in every index")

    def cap(*bounds):
        return min(b for b in bounds if b is not None)

    i_max = cap(cap_a1, cap_b1)
    total = w1 * 0 + w2 * 0 + w3 * 0 + w4 * 0
    w1p = _powers(w1, i_max)
    w2p = _powers(w2, cap(cap_a1, cap_b2))
    w3p = _powers(w3, cap(cap_a2, cap_b1))
    w4p = _powers(w4, cap(cap_a2, cap_b2))
    for i in range(i_max + 1):
        j_max = cap(None if cap_a1 is None else cap_a1 - i, cap_b2)
        for j in range(j_max + 1):
            pa1 = pochhammer(a1, i + j)
            if pa1 == 0:
                continue
            k_max = cap(cap_a2, None if cap_b1 is None else cap_b1 - i)
            for k in range(k_max + 1):
                pb1 = pochhammer(b1, i + k)
                if pb1 == 0:
                    continue
                l_max = cap(None if cap_a2 is None else cap_a2 - k,
                            None if cap_b2 is None else cap_b2 - j)
                for l in range(l_max + 1):
                    num = pa1 * pochhammer(a2, k + l) * pb1 * pochhammer(b2, j + l)
                    if num == 0:
                        continue
                    s = i + j + k + l
                    bottom = pochhammer(c, s)
                    if bottom == 0:
                        raise BottomZeroError(
                            f"bottom parameter {c} hits zero at total degree {s} on a surviving term"
                        )
                    coeff = num / (factorial(i) * factorial(j) * factorial(k) * factorial(l) * bottom)
                    total += coeff * w1p[i] * w2p[j] * w3p[k] * w4p[l]
    return total


# ---------------------------------------------------------------------------
# the polynomial family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class F12Arguments:
    """Spectral labels (m1, m2), state (x1, x2), grid size N and weights."""

    m1: int
    m2: int
    x1: int
    x2: int
    n: int
    u1: Rational
    v1: Rational
    u2: Rational
    v2: Rational

    def __post_init__(self):
        if min(self.m1, self.m2, self.x1, self.x2, self.n) < 0:
            raise GridRangeError("labels must be nonnegative")
        if self.m1 + self.m2 > self.n or self.x1 + self.x2 > self.n:
            raise GridRangeError(
                f"triangle inequality violated: m={self.m1, self.m2} x={self.x1, self.x2} N={self.n}"
            )

    @classmethod
    def from_params(cls, ps: ParameterSet, n: int, m: tuple[int, int], x: tuple[int, int]):
        return cls(m[0], m[1], x[0], x[1], n, ps.u1, ps.v1, ps.u2, ps.v2)

    def weights(self):
        return (self.u1, self.v1, self.u2, self.v2)


def _window_tables(args: F12Arguments):
    m1, m2, x1, x2, n = args.m1, args.m2, args.x1, args.x2, args.n
    return (
        pochhammer_row(-m1, m1),
        pochhammer_row(-m2, m2),
        pochhammer_row(-x1, min(x1, m1 + m2)),
        pochhammer_row(-x2, min(x2, m1 + m2)),
        pochhammer_row(-n, m1 + m2),
    )


def krawtchouk_value(args: F12Arguments):
    """Exact value of P[m1,m2](x1,x2); every vanishing term is skipped.

    The support windows are i+j <= m1, k+l <= m2, i+k <= x1, j+l <= x2,
    so the work is bounded by the label sizes, not by N^4.
    """
    m1, m2, x1, x2 = args.m1, args.m2, args.x1, args.x2
    pm1, pm2, px1, px2, pn = _window_tables(args)
    i_max = min(m1, x1)
    u1p = _powers(args.u1, i_max)
    v1p = _powers(args.v1, min(m1, x2))
    u2p = _powers(args.u2, min(m2, x1))
    v2p = _powers(args.v2, min(m2, x2))
    total = args.u1 * 0
    for i in range(i_max + 1):
        for j in range(min(m1 - i, x2) + 1):
            left = pm1[i + j] * u1p[i] * v1p[j]
            fij = factorial(i) * factorial(j)
            for k in range(min(m2, x1 - i) + 1):
                for l in range(min(m2 - k, x2 - j) + 1):
                    num = pm2[k + l] * px1[i + k] * px2[j + l]
                    den = fij * factorial(k) * factorial(l) * pn[i + j + k + l]
                    total += left * u2p[k] * v2p[l] * Fraction(num, den)
    return total


def krawtchouk_partials(args: F12Arguments):
    """Exact (dP/du1, dP/dv1, dP/du2, dP/dv2) by term-wise differentiation.

    Differentiation decrements the exponent of each monomial rather than
    dividing by the variable, so zero weights are safe.
    """
    m1, m2, x1, x2 = args.m1, args.m2, args.x1, args.x2
    pm1, pm2, px1, px2, pn = _window_tables(args)
    u1p = _powers(args.u1, min(m1, x1))
    v1p = _powers(args.v1, min(m1, x2))
    u2p = _powers(args.u2, min(m2, x1))
    v2p = _powers(args.v2, min(m2, x2))
    zero = args.u1 * 0
    d = [zero, zero, zero, zero]
    for i in range(min(m1, x1) + 1):
        for j in range(min(m1 - i, x2) + 1):
            fij = factorial(i) * factorial(j)
            top = pm1[i + j]
            for k in range(min(m2, x1 - i) + 1):
                for l in range(min(m2 - k, x2 - j) + 1):
                    num = top * pm2[k + l] * px1[i + k] * px2[j + l]
                    coeff = Fraction(num, fij * factorial(k) * factorial(l) * pn[i + j + k + l])
                    if i:
                        d[0] += coeff * i * u1p[i - 1] * v1p[j] * u2p[k] * v2p[l]
                    if j:
                        d[1] += coeff * u1p[i] * j * v1p[j - 1] * u2p[k] * v2p[l]
                    if k:
                        d[2] += coeff * u1p[i] * v1p[j] * k * u2p[k - 1] * v2p[l]
                    if l:
                        d[3] += coeff * u1p[i] * v1p[j] * u2p[k] * l * v2p[l - 1]
    return tuple(d)


class PolynomialTable:
    """All values P[m](x) over the spectral and state grids of one family."""

    def __init__(self, n: int, params: ParameterSet, values: dict):
        self.n = n
        self.params = params
        self.values = values
        self.grid = TriangularGrid(n)

    @classmethod
    def build(cls, params: ParameterSet, n: int, workers: int | None = None) -> "PolynomialTable":
        grid = TriangularGrid(n)
        points = grid.points()

        def row(m):
            return {
                (m, x): krawtchouk_value(F12Arguments.from_params(params, n, m, x))
                for x in points
            }

        values: dict = {}
        if workers and workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for chunk in pool.map(row, points):
                    values.update(chunk)
        else:
            for m in points:
                values.update(row(m))
        return cls(n, params, values)

    def value(self, m: tuple[int, int], x: tuple[int, int]):
        self.grid.require(m)
        self.grid.require(x)
        return self.values[(m, x)]

    def to_json_dict(self) -> dict:
        return {
            "N": self.n,
            "params": self.params.to_json_dict(),
            "values": [
                {"m": [m[0], m[1]], "x": [x[0], x[1]], "value": format_rational(val)}
                for (m, x), val in sorted(self.values.items())
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)


# ---------------------------------------------------------------------------
# Appell F1
# ---------------------------------------------------------------------------

def appell_f1_terms(a, b, b2, c, x, y):
    """Terms of F1(a; b, b2; c; x, y) in row-major (i, then j) order.

    Only usable in the terminating regime; the term stream is finite.
    """
    a, b, b2, c = (as_rational(t) for t in (a, b, b2, c))
    cap_a = _nonpositive_int_bound(a)
    cap_b = _nonpositive_int_bound(b)
    cap_b2 = _nonpositive_int_bound(b2)
    if cap_a is None and (cap_b is None or cap_b2 is None):
        raise NonTerminatingError("Appell series does not terminate")
    i_max = min(v for v in (cap_a, cap_b) if v is not None)
    terms = []
    xp = _powers(x, i_max)
    for i in range(i_max + 1):
        j_max = min(v for v in (None if cap_a is None else cap_a - i, cap_b2) if v is not None)
        yp = _powers(y, j_max)
        for j in range(j_max + 1):
            num = pochhammer(a, i + j) * pochhammer(b, i) * pochhammer(b2, j)
            if num == 0:
                continue
            bottom = pochhammer(c, i + j)
            if bottom == 0:
                raise BottomZeroError(f"bottom parameter {c} hits zero at degree {i + j}")
            terms.append(num / (factorial(i) * factorial(j) * bottom) * xp[i] * yp[j])
    return terms


def appell_f1_series(a, b, b2, c, x, y, max_terms: int = 4000,
                     mode: str = "auto", policy: FloatPolicy = DEFAULT_POLICY):
    """F1(a; b, b2; c; x, y) = sum (a)_(i+j) (b)_i (b2)_j x^i y^j / (i! j! (c)_(i+j)).

    Exact when the series terminates (a nonpositive integer, or both b's).
    Otherwise |x|, |y| < 1 is required and partial sums are iterated until
    two successive ones agree within the float policy.
    """
    if mode not in ("auto", "exact", "float"):
        raise ParameterError(f"unknown mode {mode!r}")
    terminating = (
        _nonpositive_int_bound(as_rational(a)) is not None
        or (_nonpositive_int_bound(as_rational(b)) is not None
            and _nonpositive_int_bound(as_rational(b2)) is not None)
    )
    if mode == "exact" or (mode == "auto" and terminating):
        if not terminating:
            raise NonTerminatingError("exact mode requires a terminating Appell series")
        return sum(appell_f1_terms(a, b, b2, c, x, y), Fraction(0))

    a_f, b_f, b2_f, c_f = (float(as_rational(t)) for t in (a, b, b2, c))
    x_f, y_f = float(x), float(y)
    if not (abs(x_f) < 1 and abs(y_f) < 1):
        raise ParameterError("floating Appell summation requires |x|, |y| < 1")
    total = 0.0
    previous = math.inf
    terms_used = 0
    s = 0
    while terms_used <= max_terms:
        shell = 0.0
        for i in range(s + 1):
            j = s - i
            num = _float_poch(a_f, s) * _float_poch(b_f, i) * _float_poch(b2_f, j)
            den = math.factorial(i) * math.factorial(j) * _float_poch(c_f, s)
            if den == 0:
                raise BottomZeroError(f"bottom parameter {c} hits zero at degree {s}")
            shell += num / den * x_f**i * y_f**j
        total += shell
        terms_used += s + 1
        if s > 0 and policy.close(total, previous):
            return total
        previous = total
        s += 1
    raise ConvergenceError(f"no convergence within {max_terms} terms")


def _float_poch(a: float, k: int) -> float:
    out = 1.0
    for t in range(k):
        out *= a + t
    return out


def appell_f1_integral(a, b, b2, c, x, y, quad_order: int = 80) -> float:
    """Quadrature value of the single-integral representation

        F1 = Gamma(c) / (Gamma(a) Gamma(c-a)) *
             integral_0^1 s^(a-1) (1-s)^(c-a-1) (1-s x)^(-b) (1-s y)^(-b2) ds

    valid for 0 < a, 0 < c - a and x, y < 1.  The endpoint-singular factors
    are absorbed into a Gauss-Jacobi weight, so low orders already reach
    near machine precision for smooth integrands.
    """
    from scipy.special import roots_jacobi

    a_f, b_f, b2_f, c_f = (float(as_rational(t)) for t in (a, b, b2, c))
    x_f, y_f = float(x), float(y)
    if not (a_f > 0 and c_f - a_f > 0):
        raise ParameterError("integral representation requires 0 < a and 0 < c - a")
    if not (x_f < 1 and y_f < 1):
        raise ParameterError("integral representation requires x, y < 1")
    nodes, weights = roots_jacobi(quad_order, c_f - a_f - 1, a_f - 1)
    total = 0.0
    for t, w in zip(nodes, weights):
        s = (1 + t) / 2
        total += w * (1 - s * x_f) ** (-b_f) * (1 - s * y_f) ** (-b2_f)
    constant = math.gamma(c_f) / (math.gamma(a_f) * math.gamma(c_f - a_f))
    return constant * 2.0 ** (1 - c_f) * total


def f12_integral_check(a1, a2, b1, b2, c, u1, v1, u2, v2,
                       quad_order: int = 60) -> tuple[float, float]:
    """Double-integral representation versus the double series, as floats.

    The representation

        F = Gamma(c) / (Gamma(a1) Gamma(a2) Gamma(c-a1-a2)) *
            integral over {s1, s2 > 0, s1+s2 < 1} of
            s1^(a1-1) s2^(a2-1) (1-s1-s2)^(c-a1-a2-1)
            (1 - u1 s1 - u2 s2)^(-b1) (1 - v1 s1 - v2 s2)^(-b2)

    holds for 0 < a1, a2 and a1 + a2 < c.  The polynomial parameter case
    (nonpositive integer a's) sits outside this region on purpose; this
    check exists to validate the representation where it converges.
    Returns (quadrature value, series value).
    """
    from scipy.special import roots_jacobi

    a1r, a2r, b1r, b2r, cr = (as_rational(t) for t in (a1, a2, b1, b2, c))
    af1, af2, bf1, bf2, cf = (float(t) for t in (a1r, a2r, b1r, b2r, cr))
    if not (af1 > 0 and af2 > 0 and af1 + af2 < cf):
        raise ParameterError("double integral requires 0 < a1, a2 and a1 + a2 < c")
    u1f, v1f, u2f, v2f = (float(as_rational(t)) for t in (u1, v1, u2, v2))

    t_nodes, t_weights = roots_jacobi(quad_order, cf - af1 - af2 - 1, af1 + af2 - 1)
    w_nodes, w_weights = roots_jacobi(quad_order, af2 - 1, af1 - 1)
    total = 0.0
    for tn, tw in zip(t_nodes, t_weights):
        t = (1 + tn) / 2
        inner = 0.0
        for wn, ww in zip(w_nodes, w_weights):
            w = (1 + wn) / 2
            s1 = t * w
            s2 = t * (1 - w)
            g1 = 1 - u1f * s1 - u2f * s2
            g2 = 1 - v1f * s1 - v2f * s2
            if (g1 <= 0 and bf1 != int(bf1)) or (g2 <= 0 and bf2 != int(bf2)):
                raise ParameterError("integrand base crosses zero with fractional exponent")
            inner += ww * g1 ** (-bf1) * g2 ** (-bf2)
        total += tw * inner
    total *= 2.0 ** (1 - af1 - af2) * 2.0 ** (1 - cf)
    constant = math.gamma(cf) / (math.gamma(af1) * math.gamma(af2) * math.gamma(cf - af1 - af2))
    integral_value = constant * total

    if _nonpositive_int_bound(b1r) is not None and _nonpositive_int_bound(b2r) is not None:
        series_value = float(f12_series(a1r, a2r, b1r, b2r, cr,
                                        as_rational(u1), as_rational(v1),
                                        as_rational(u2), as_rational(v2)))
    else:
        series_value = _f12_float_series(af1, af2, bf1, bf2, cf, u1f, v1f, u2f, v2f)
    return integral_value, series_value


def _f12_float_series(a1, a2, b1, b2, c, u1, v1, u2, v2,
                      max_degree: int = 400, policy: FloatPolicy = DEFAULT_POLICY) -> float:
    total = 0.0
    previous = math.inf
    for s in range(max_degree + 1):
        shell = 0.0
        for i in range(s + 1):
            for j in range(s - i + 1):
                for k in range(s - i - j + 1):
                    l = s - i - j - k
                    num = (_float_poch(a1, i + j) * _float_poch(a2, k + l)
                           * _float_poch(b1, i + k) * _float_poch(b2, j + l))
                    den = (math.factorial(i) * math.factorial(j) * math.factorial(k)
                           * math.factorial(l) * _float_poch(c, s))
                    shell += num / den * u1**i * v1**j * u2**k * v2**l
        total += shell
        if s > 1 and policy.close(total, previous):
            return total
        previous = total
    raise ConvergenceError(f"double series did not converge within degree {max_degree}")


# ---------------------------------------------------------------------------
# transformation identities
# ---------------------------------------------------------------------------

def pfaff_pair(args: F12Arguments, variant: int) -> tuple[Rational, Rational]:
    """Both sides of the Pfaff-style prefactor transformation.

    Variant 1 rewrites around the v-weights (requires v1, v2 != 1), variant
    2 around the u-weights (requires u1, u2 != 1):

        P = (1-v1)^m1 (1-v2)^m2 * F[-m1,-m2; -x1, -(N-x1-x2); -N;
              (u1-v1)/(1-v1), -v1/(1-v1), (u2-v2)/(1-v2), -v2/(1-v2)]
        P = (1-u1)^m1 (1-u2)^m2 * F[-m1,-m2; -(N-x1-x2), -x2; -N;
              -u1/(1-u1), (v1-u1)/(1-u1), -u2/(1-u2), (v2-u2)/(1-u2)]

    Returned as (lhs, rhs) so a caller can diff them on failure.
    """
    m1, m2, x1, x2, n = args.m1, args.m2, args.x1, args.x2, args.n
    u1, v1, u2, v2 = args.weights()
    lhs = krawtchouk_value(args)
    if variant == 1:
        if v1 == 1 or v2 == 1:
            raise ParameterError("variant 1 requires v1 != 1 and v2 != 1")
        prefactor = (1 - v1) ** m1 * (1 - v2) ** m2
        rhs = prefactor * f12_series(
            -m1, -m2, -x1, -(n - x1 - x2), -n,
            (u1 - v1) / (1 - v1), -v1 / (1 - v1), (u2 - v2) / (1 - v2), -v2 / (1 - v2),
        )
    elif variant == 2:
        if u1 == 1 or u2 == 1:
            raise ParameterError("variant 2 requires u1 != 1 and u2 != 1")
        prefactor = (1 - u1) ** m1 * (1 - u2) ** m2
        rhs = prefactor * f12_series(
            -m1, -m2, -(n - x1 - x2), -x2, -n,
            -u1 / (1 - u1), (v1 - u1) / (1 - u1), -u2 / (1 - u2), (v2 - u2) / (1 - u2),
        )
    else:
        raise ParameterError(f"variant must be 1 or 2, got {variant!r}")
    return lhs, rhs


def complementary_pair(args: F12Arguments) -> tuple[Rational, Rational]:
    """Both sides of the terminating complementary-weight transformation

        P = (x1+x2-N)_(m1+m2) / (-N)_(m1+m2) *
            F[-m1,-m2; -x1,-x2; N+1-x1-x2-m1-m2; 1-u1, 1-v1, 1-u2, 1-v2].

    The right side's bottom parameter can reach zero on surviving terms
    whenever m1+m2+x1+x2 > N; that raises BottomZeroError, the identity is
    genuinely inapplicable there.
    """
    m1, m2, x1, x2, n = args.m1, args.m2, args.x1, args.x2, args.n
    u1, v1, u2, v2 = args.weights()
    lhs = krawtchouk_value(args)
    prefactor = Fraction(pochhammer(x1 + x2 - n, m1 + m2), pochhammer(-n, m1 + m2))
    rhs = prefactor * f12_series(
        -m1, -m2, -x1, -x2, n + 1 - x1 - x2 - m1 - m2,
        1 - u1, 1 - v1, 1 - u2, 1 - v2,
    )
    return lhs, rhs


def complementary_pair_2f1(m: int, x: int, n: int, u) -> tuple[Rational, Rational]:
    """One-variable degeneration of the complementary transformation:

        2F1(-m,-x;-N;u) = (x-N)_m / (-N)_m * 2F1(-m,-x; N+1-x-m; 1-u)

    (and symmetrically with the roles of m and x swapped in the prefactor).
    """
    u = as_rational(u)
    lhs = gauss_2f1_terminating(-m, -x, -n, u)
    prefactor = Fraction(pochhammer(x - n, m), pochhammer(-n, m))
    rhs = prefactor * gauss_2f1_terminating(-m, -x, n + 1 - x - m, 1 - u)
    return lhs, rhs
