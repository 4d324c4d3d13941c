"""The cumulative-Bernoulli ("poker dice") transition kernel on the
triangular grid, its stationary law, and the eigenfunction pairing with the
polynomial family.

One transition from state (i1, i2) keeps k1 ~ Binomial(i1, alpha1) balls of
the first kind and k2 ~ Binomial(i2, alpha2) of the second, then redraws the
remaining N - k1 - k2 slots trinomially with probabilities (beta1, beta2):

    K(j1, j2; i1, i2) = sum over k1 <= min(i1, j1), k2 <= min(i2, j2) of
        b(k1, i1; alpha1) b(k2, i2; alpha2)
        * b2(j1-k1, j2-k2; N-k1-k2; beta1, beta2)

The matrix is stored column-stochastic: entry (j; i) is the probability of
moving from source i to target j, so each source column sums to exactly 1.
This follows the (final; initial) argument order of the kernel definition;
the off-by-transpose trap lives exactly here.

Since all N slots evolve independently under one 3-state slot chain, the
kernel's exact spectral data reduces to that 3x3 matrix.  Whenever the slot
chain has rational eigenvalues, the right eigenvectors normalize to
(1, 1-u, 1-v) columns and hand back a polynomial family for which the
eigenfunction ratio test passes exactly.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import TriangularGrid, binomial_pmf, trinomial_pmf
from .errors import ConvergenceError, GridRangeError, ParameterError, SingularSystemError
from .hyper import PolynomialTable
from .linalg import nullspace
from .params import ParameterSet
from .scalar import FloatPolicy, DEFAULT_POLICY, Rational, as_rational, format_rational, to_float


@dataclass(frozen=True)
class KernelParameters:
    """Thinning probabilities (alpha1, alpha2), redraw probabilities
    (beta1, beta2) with beta1 + beta2 <= 1, and the grid size N.

    The probabilistic model needs every parameter in the closed unit
    interval; the open interval (plus beta1 + beta2 < 1) is the interior
    regime in which the chain is irreducible and the stationary law unique.
    """

    alpha1: Rational
    alpha2: Rational
    beta1: Rational
    beta2: Rational
    n: int

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            value = as_rational(getattr(self, name))
            object.__setattr__(self, name, value)
            if not 0 <= value <= 1:
                raise ParameterError(f"{name} = {value} outside [0, 1]")
        if self.beta1 + self.beta2 > 1:
            raise ParameterError("beta1 + beta2 must not exceed 1")
        if self.n < 0:
            raise ParameterError("grid size must be nonnegative")

    @property
    def interior(self) -> bool:
        return (all(0 < v < 1 for v in (self.alpha1, self.alpha2, self.beta1, self.beta2))
                and self.beta1 + self.beta2 < 1)

    def to_json_dict(self) -> dict:
        return {
            "alpha1": format_rational(self.alpha1),
            "alpha2": format_rational(self.alpha2),
            "beta1": format_rational(self.beta1),
            "beta2": format_rational(self.beta2),
            "N": self.n,
        }


class KernelMatrix:
    """Exact column-stochastic transition matrix over the triangular grid."""

    def __init__(self, n: int, entries: dict):
        self.n = n
        self.grid = TriangularGrid(n)
        self.entries = entries

    def entry(self, target: tuple[int, int], source: tuple[int, int]) -> Rational:
        self.grid.require(target)
        self.grid.require(source)
        return self.entries[(target, source)]

    def source_sums(self) -> dict:
        sums = {i: Fraction(0) for i in self.grid}
        for (j, i), value in self.entries.items():
            sums[i] += value
        return sums

    def is_stochastic(self) -> bool:
        return (all(v >= 0 for v in self.entries.values())
                and all(total == 1 for total in self.source_sums().values()))

    def apply_to_function(self, values: dict) -> dict:
        """(K f)(i) = sum over targets j of K(j; i) f(j)."""
        out = {}
        for i in self.grid:
            out[i] = sum((self.entries[(j, i)] * values[j] for j in self.grid), Fraction(0))
        return out

    def to_dense(self) -> list[list[Rational]]:
        """Rows indexed by target, columns by source, lexicographic grid order."""
        points = self.grid.points()
        return [[self.entries[(j, i)] for i in points] for j in points]

    def to_csv(self) -> str:
        out = io.StringIO()
        labels = [f"{a}_{b}" for (a, b) in self.grid]
        out.write("target\\source," + ",".join(labels) + "\n")
        for j, row_label in zip(self.grid, labels):
            row = [format_rational(self.entries[(j, i)]) for i in self.grid]
            out.write(row_label + "," + ",".join(row) + "\n")
        return out.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "N": self.n,
            "order": "lexicographic",
            "orientation": "entry [target][source]; source columns sum to 1",
            "entries": [[format_rational(v) for v in row] for row in self.to_dense()],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)


def build_kernel(kp: KernelParameters) -> KernelMatrix:
    """Exact kernel matrix; the trinomial redraw factor is skipped whenever
    its count pair leaves the shrunken grid, it contributes zero there."""
    n = kp.n
    grid = TriangularGrid(n)
    entries = {(j, i): Fraction(0) for j in grid for i in grid}
    thin1 = {i1: [binomial_pmf(k, i1, kp.alpha1) for k in range(i1 + 1)] for i1 in range(n + 1)}
    thin2 = {i2: [binomial_pmf(k, i2, kp.alpha2) for k in range(i2 + 1)] for i2 in range(n + 1)}
    for (i1, i2) in grid:
        for k1 in range(i1 + 1):
            for k2 in range(i2 + 1):
                keep = thin1[i1][k1] * thin2[i2][k2]
                if keep == 0:
                    continue
                remaining = n - k1 - k2
                for d1 in range(remaining + 1):
                    for d2 in range(remaining - d1 + 1):
                        mass = trinomial_pmf(d1, d2, remaining, kp.beta1, kp.beta2)
                        entries[((k1 + d1, k2 + d2), (i1, i2))] += keep * mass
    return KernelMatrix(n, entries)


def slot_matrix(kp: KernelParameters) -> list[list[Rational]]:
    """Row-stochastic 3x3 chain of a single slot, states (free, kind1, kind2)."""
    alphas = (Fraction(0), kp.alpha1, kp.alpha2)
    betas = (1 - kp.beta1 - kp.beta2, kp.beta1, kp.beta2)
    return [
        [alphas[s] * (1 if s == t else 0) + (1 - alphas[s]) * betas[t] for t in range(3)]
        for s in range(3)
    ]


def stationary_distribution(kernel: KernelMatrix) -> dict:
    """Exact solution of pi K = pi with sum(pi) = 1 by rational elimination.

    Raises if the fixed-point space has dimension other than one, which for
    interior parameters would indicate a reducible chain.
    """
    points = kernel.grid.points()
    size = len(points)
    rows = []
    for j_idx, j in enumerate(points):
        row = []
        for i_idx, i in enumerate(points):
            value = kernel.entries[(j, i)]
            if i_idx == j_idx:
                value = value - 1
            row.append(value)
        rows.append(row)
    basis = nullspace(rows)
    if len(basis) != 1:
        raise SingularSystemError(
            f"stationary space has dimension {len(basis)}, expected 1"
        )
    vec = basis[0]
    total = sum(vec, Fraction(0))
    if total == 0:
        raise SingularSystemError("stationary vector sums to zero")
    return {point: value / total for point, value in zip(points, vec)}


def stationary_distribution_float(kernel: KernelMatrix, policy: FloatPolicy = DEFAULT_POLICY,
                                  max_iterations: int = 100000) -> dict:
    """Power-iteration fallback for grids too large for exact elimination."""
    points = kernel.grid.points()
    dense = [[to_float(v) for v in row] for row in kernel.to_dense()]
    size = len(points)
    vec = [1.0 / size] * size
    for _ in range(max_iterations):
        new = [sum(dense[j][i] * vec[i] for i in range(size)) for j in range(size)]
        total = sum(new)
        new = [v / total for v in new]
        if all(policy.close(a, b) for a, b in zip(new, vec)):
            return {point: value for point, value in zip(points, new)}
        vec = new
    raise ConvergenceError("power iteration did not converge")


def slot_stationary(kp: KernelParameters) -> tuple[Rational, Rational]:
    """(eta1, eta2) of the per-slot stationary law, in closed form.

    Solving sigma T = sigma for the slot chain gives
    sigma_kind = beta_kind * Q / (1 - alpha_kind) with
    Q = 1 - alpha1 sigma1 - alpha2 sigma2 resolved rationally.
    """
    if kp.alpha1 == 1 or kp.alpha2 == 1:
        raise ParameterError("slot stationary law needs alpha < 1")
    denom = 1 + kp.alpha1 * kp.beta1 / (1 - kp.alpha1) + kp.alpha2 * kp.beta2 / (1 - kp.alpha2)
    q = 1 / denom
    return kp.beta1 * q / (1 - kp.alpha1), kp.beta2 * q / (1 - kp.alpha2)


def fit_eta(pi: dict, n: int) -> tuple[Rational, Rational] | None:
    """Invert the trinomial family from first moments.

    Candidate parameters are eta1 = E[x1]/N, eta2 = E[x2]/N; returns None
    when any exact trinomial mass disagrees with pi.  For N = 0 the moments
    carry no information and (0, 0) is returned trivially.
    """
    grid = TriangularGrid(n)
    if n == 0:
        return (Fraction(0), Fraction(0))
    mean1 = sum((pi[x] * x[0] for x in grid), Fraction(0))
    mean2 = sum((pi[x] * x[1] for x in grid), Fraction(0))
    eta1, eta2 = mean1 / n, mean2 / n
    if eta1 < 0 or eta2 < 0 or eta1 + eta2 > 1:
        return None
    for x in grid:
        if trinomial_pmf(x[0], x[1], n, eta1, eta2) != pi[x]:
            return None
    return eta1, eta2


def eigenfunction_ratio_test(kernel: KernelMatrix, table: PolynomialTable,
                             m: tuple[int, int]) -> tuple[bool, Rational | None]:
    """Whether K P[m] = lambda P[m] entrywise for a single exact lambda.

    Needs no prior knowledge of lambda: the ratio (K P[m]) / P[m] must be
    constant across states where P[m] is nonzero, and K P[m] must vanish
    wherever P[m] does.
    """
    if kernel.n != table.n:
        raise GridRangeError(f"kernel size {kernel.n} != table size {table.n}")
    values = {x: table.value(m, x) for x in table.grid}
    transformed = kernel.apply_to_function(values)
    ratio = None
    for x in table.grid:
        if values[x] == 0:
            if transformed[x] != 0:
                return False, None
            continue
        current = transformed[x] / values[x]
        if ratio is None:
            ratio = current
        elif current != ratio:
            return False, None
    return True, ratio


def spectrum_float(kernel: KernelMatrix) -> list[float]:
    """All eigenvalue magnitudes of the dense float matrix, sorted descending.

    Complex pairs are reported by modulus; for calibrated kernels the exact
    spectrum is real and the moduli match the exact eigenvalues.
    """
    import numpy as np

    dense = np.array([[to_float(v) for v in row] for row in kernel.to_dense()])
    try:
        eigenvalues = np.linalg.eigvals(dense)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"dense eigensolver failed: {exc}") from exc
    return sorted((abs(complex(value)) for value in eigenvalues), reverse=True)


# ---------------------------------------------------------------------------
# pairing kernels with polynomial families
# ---------------------------------------------------------------------------

def _rational_sqrt(value: Fraction) -> Fraction | None:
    if value < 0:
        return None
    num = math.isqrt(value.numerator)
    den = math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def slot_spectrum(kp: KernelParameters) -> tuple[Rational, Rational] | None:
    """The two non-unit slot eigenvalues when they are rational, else None.

    The slot chain's characteristic polynomial factors as (x - 1) times
    x^2 - (trace - 1) x + det; rationality is decided by whether the
    discriminant is a perfect rational square.
    """
    t = slot_matrix(kp)
    trace = t[0][0] + t[1][1] + t[2][2]
    det = (t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1])
           - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
           + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]))
    b = trace - 1
    c = det
    root = _rational_sqrt(b * b - 4 * c)
    if root is None:
        return None
    return (b + root) / 2, (b - root) / 2


def family_from_kernel(kp: KernelParameters) -> tuple[ParameterSet, Rational, Rational]:
    """Extract the polynomial family diagonalizing the kernel, exactly.

    Requires the slot spectrum to be rational, simple, and its eigenvectors
    to have nonzero leading component; each eigenvector then normalizes to
    (1, 1-u, 1-v) and the stationary slot law provides (eta1, eta2).  The
    returned family satisfies the three orthogonality conditions by
    construction (slot eigenvectors are orthogonal under the stationary
    weights), and passes the eigenfunction ratio test at every label with
    lambda[m1,m2] = mu1^m1 * mu2^m2.
    """
    mus = slot_spectrum(kp)
    if mus is None:
        raise ParameterError("slot spectrum is irrational; no exact family extraction")
    mu1, mu2 = mus
    if mu1 == mu2 or 1 in (mu1, mu2):
        raise ParameterError("slot spectrum must be simple and distinct from 1")
    t = slot_matrix(kp)
    weights = []
    for mu in (mu1, mu2):
        rows = [[t[r][c] - (mu if r == c else 0) for c in range(3)] for r in range(3)]
        basis = nullspace(rows)
        if len(basis) != 1:
            raise ParameterError(f"eigenvalue {mu} is not simple")
        vec = basis[0]
        if vec[0] == 0:
            raise ParameterError("eigenvector has zero leading component; family degenerate")
        vec = [v / vec[0] for v in vec]
        weights.append((1 - vec[1], 1 - vec[2]))
    (u1, v1), (u2, v2) = weights
    eta1, eta2 = slot_stationary(kp)
    ps = ParameterSet(u1=u1, v1=v1, u2=u2, v2=v2, eta1=eta1, eta2=eta2)
    if not ps.orthogonal:
        raise ParameterError("extracted family fails the orthogonality conditions")
    return ps, mu1, mu2


@dataclass(frozen=True)
class Calibration:
    """A kernel candidate paired with a family, with validity flags.

    `valid` records whether all four probabilities landed inside the open
    unit interval (with beta1 + beta2 < 1).  For families generated by
    strictly positive quadruples this is provably never the case: those
    weights satisfy (1-u1)(1-v1) < 0, while validity forces the leading
    slot-eigenvector components (1-u1) and (1-v1) to share a sign.
    """

    alpha1: Rational
    alpha2: Rational
    beta1: Rational
    beta2: Rational
    mu1: Rational
    mu2: Rational
    valid: bool

    def kernel_parameters(self, n: int) -> KernelParameters:
        if not self.valid:
            raise ParameterError("calibration lies outside the probability region")
        return KernelParameters(self.alpha1, self.alpha2, self.beta1, self.beta2, n)


def calibrate(ps: ParameterSet, mu1) -> Calibration:
    """The unique kernel candidate making the family an exact eigenbasis,
    given the first eigenvalue mu1.

    Inverts the eigenvector conditions
        alpha1 = mu1 u1 / (mu1 + u1 - 1),  alpha2 = mu1 v1 / (mu1 + v1 - 1),
        mu2 = alpha1 (1 - u2) / (alpha1 - u2),
    then solves the linear system u*beta = 1 - mu for the redraw pair.
    """
    mu1 = as_rational(mu1)
    if not ps.orthogonal:
        raise ParameterError("calibration requires an orthogonal family")
    if ps.dual_singular:
        raise SingularSystemError("calibration needs u1*v2 - u2*v1 != 0")
    for name, w in (("u1", ps.u1), ("v1", ps.v1)):
        if mu1 + w - 1 == 0:
            raise SingularSystemError(f"mu1 + {name} - 1 = 0; eigenvector inversion singular")
    alpha1 = mu1 * ps.u1 / (mu1 + ps.u1 - 1)
    alpha2 = mu1 * ps.v1 / (mu1 + ps.v1 - 1)
    if alpha1 == ps.u2:
        raise SingularSystemError("alpha1 = u2; second eigenvalue undefined")
    mu2 = alpha1 * (1 - ps.u2) / (alpha1 - ps.u2)
    # The same mu2 must satisfy the v-side eigenvector condition; for an
    # orthogonal family this is the cone condition in disguise.
    if mu2 + ps.v2 - 1 == 0 or alpha2 != mu2 * ps.v2 / (mu2 + ps.v2 - 1):
        raise ParameterError("family violates the cone compatibility for calibration")
    det = ps.dual_det
    beta1 = ((1 - mu1) * ps.v2 - (1 - mu2) * ps.v1) / det
    beta2 = (ps.u1 * (1 - mu2) - ps.u2 * (1 - mu1)) / det
    valid = (all(0 < value < 1 for value in (alpha1, alpha2, beta1, beta2))
             and beta1 + beta2 < 1)
    return Calibration(alpha1, alpha2, beta1, beta2, mu1, mu2, valid)


def search_calibrated_kernels(seeds, mu_values, n: int) -> list[tuple[KernelParameters, ParameterSet, Rational, Rational]]:
    """Sweep a rational lattice of orthogonal families and eigenvalue picks,
    keeping the calibrations that land inside the probability region.

    `seeds` iterates (u1, v1, eta1) triples, each completed to a full
    orthogonal family; `mu_values` iterates candidate leading eigenvalues.
    A raw lattice over the four kernel probabilities almost never has a
    rational slot spectrum, so the sweep runs through exact family data
    instead and lets validity filter the kernels.
    """
    from .params import complete_orthogonal_family

    found = []
    for (u1, v1, eta1) in seeds:
        try:
            ps = complete_orthogonal_family(u1, v1, eta1)
        except (ParameterError, SingularSystemError, ZeroDivisionError):
            continue
        for mu1 in mu_values:
            try:
                cal = calibrate(ps, mu1)
            except (ParameterError, SingularSystemError):
                continue
            if cal.valid and cal.mu1 != cal.mu2:
                found.append((cal.kernel_parameters(n), ps, cal.mu1, cal.mu2))
    return found
