"""Parameter construction and validation for the polynomial family.

A family is determined by weights (u1, v1, u2, v2) and trinomial parameters
(eta1, eta2).  The family is orthogonal with respect to the trinomial law
exactly when three bilinear conditions hold:

    (a)  eta1*u1 + eta2*v1 = 1
    (b)  eta1*u2 + eta2*v2 = 1
    (c)  eta1*u1*u2 + eta2*v1*v2 = 1

The positive quadruple (p1, p2, p3, p4) parametrizes solutions of (a)-(c)
in closed form; this module builds parameter sets from quadruples, from
explicit weights, and computes the dual trinomial weights used by the
closed-form norms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParameterError, SingularSystemError
from .scalar import Rational, as_rational, format_rational


@dataclass(frozen=True)
class PQuadruple:
    """Four strictly positive rationals; the source parametrization."""

    p1: Rational
    p2: Rational
    p3: Rational
    p4: Rational

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "p4"):
            value = as_rational(getattr(self, name))
            object.__setattr__(self, name, value)
            if value <= 0:
                raise ParameterError(f"{name} must be strictly positive, got {value}")

    @property
    def total(self) -> Rational:
        return self.p1 + self.p2 + self.p3 + self.p4

    @property
    def delta(self) -> Rational:
        return self.p1 * self.p4 - self.p2 * self.p3

    @property
    def delta_singular(self) -> bool:
        return self.delta == 0

    def scaled(self, c) -> "PQuadruple":
        c = as_rational(c)
        return PQuadruple(c * self.p1, c * self.p2, c * self.p3, c * self.p4)

    def as_tuple(self):
        return (self.p1, self.p2, self.p3, self.p4)

    @classmethod
    def parse(cls, text: str) -> "PQuadruple":
        parts = [piece.strip() for piece in text.split(",")]
        if len(parts) != 4:
            raise ParameterError(f"expected four comma-separated rationals, got {text!r}")
        return cls(*(as_rational(piece) for piece in parts))

    def to_json_dict(self):
        return [format_rational(p) for p in self.as_tuple()]


@dataclass(frozen=True)
class ParameterSet:
    """Weights and trinomial parameters of one polynomial family.

    Construction never rejects a set for failing the orthogonality
    conditions: the polynomials are well defined regardless, and the test
    suite exercises exactly how orthogonality fails without them.  The
    computed flags record which regimes the set is in.
    """

    u1: Rational
    v1: Rational
    u2: Rational
    v2: Rational
    eta1: Rational
    eta2: Rational
    dual_det: Rational = field(init=False)
    eta_bar1: Rational | None = field(init=False)
    eta_bar2: Rational | None = field(init=False)
    orthogonal: bool = field(init=False)
    eta_valid: bool = field(init=False)
    boundary: bool = field(init=False)
    dual_singular: bool = field(init=False)

    def __post_init__(self):
        for name in ("u1", "v1", "u2", "v2", "eta1", "eta2"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        det = self.u1 * self.v2 - self.u2 * self.v1
        object.__setattr__(self, "dual_det", det)
        object.__setattr__(self, "dual_singular", det == 0)
        if det != 0:
            object.__setattr__(self, "eta_bar1", (self.v2 - self.u2) / det)
            object.__setattr__(self, "eta_bar2", (self.u1 - self.v1) / det)
        else:
            object.__setattr__(self, "eta_bar1", None)
            object.__setattr__(self, "eta_bar2", None)
        residuals = check_conditions_1_10(self)
        object.__setattr__(self, "orthogonal", all(r == 0 for r in residuals))
        object.__setattr__(self, "eta_valid", 0 < self.eta1 and 0 < self.eta2 and self.eta1 + self.eta2 < 1)
        object.__setattr__(self, "boundary", self.eta1 + self.eta2 == 1)

    def weights(self):
        return (self.u1, self.v1, self.u2, self.v2)

    def to_json_dict(self):
        doc = {
            "u1": format_rational(self.u1),
            "v1": format_rational(self.v1),
            "u2": format_rational(self.u2),
            "v2": format_rational(self.v2),
            "eta1": format_rational(self.eta1),
            "eta2": format_rational(self.eta2),
            "dualDet": format_rational(self.dual_det),
            "etaBar1": None if self.eta_bar1 is None else format_rational(self.eta_bar1),
            "etaBar2": None if self.eta_bar2 is None else format_rational(self.eta_bar2),
            "orthogonal": self.orthogonal,
            "etaValid": self.eta_valid,
            "boundary": self.boundary,
            "dualSingular": self.dual_singular,
        }
        return doc


def from_p(p: PQuadruple) -> ParameterSet:
    """Weights and trinomial parameters generated by a positive quadruple.

    The output satisfies conditions (a)-(c) exactly; that is asserted on
    every construction rather than trusted.
    """
    p1, p2, p3, p4 = p.as_tuple()
    total = p.total
    ps = ParameterSet(
        u1=(p1 + p2) * (p1 + p3) / (p1 * total),
        v1=(p1 + p3) * (p4 + p3) / (p3 * total),
        u2=(p1 + p2) * (p2 + p4) / (p2 * total),
        v2=(p2 + p4) * (p3 + p4) / (p4 * total),
        eta1=p1 * p2 * total / ((p1 + p2) * (p1 + p3) * (p2 + p4)),
        eta2=p3 * p4 * total / ((p2 + p4) * (p3 + p4) * (p1 + p3)),
    )
    assert ps.orthogonal, f"parametrization failed the orthogonality conditions for {p}"
    return ps


def check_conditions_1_10(ps: ParameterSet) -> tuple[Rational, Rational, Rational]:
    """Residuals of the three orthogonality conditions; all zero iff orthogonal."""
    return (
        ps.eta1 * ps.u1 + ps.eta2 * ps.v1 - 1,
        ps.eta1 * ps.u2 + ps.eta2 * ps.v2 - 1,
        ps.eta1 * ps.u1 * ps.u2 + ps.eta2 * ps.v1 * ps.v2 - 1,
    )


def check_cone_2_7(ps: ParameterSet) -> Rational:
    """Residual U1*V2 - U2*V1 with U_i = 1 - 1/u_i, V_i = 1 - 1/v_i.

    Given conditions (a) and (b), this vanishes exactly when condition (c)
    holds; geometrically the solutions form a cone.
    """
    for name, value in (("u1", ps.u1), ("v1", ps.v1), ("u2", ps.u2), ("v2", ps.v2)):
        if value == 0:
            raise ParameterError(f"{name} = 0 leaves the cone residual undefined")
    cap_u1 = 1 - 1 / ps.u1
    cap_v1 = 1 - 1 / ps.v1
    cap_u2 = 1 - 1 / ps.u2
    cap_v2 = 1 - 1 / ps.v2
    return cap_u1 * cap_v2 - cap_u2 * cap_v1


def dual_weights(ps: ParameterSet) -> tuple[Rational, Rational]:
    """Dual trinomial parameters ((v2-u2)/D, (u1-v1)/D) with D = u1*v2 - u2*v1.

    They solve the dual system

        eta_bar1*u1 + eta_bar2*u2 = 1
        eta_bar1*v1 + eta_bar2*v2 = 1
        eta_bar1*u1*v1 + eta_bar2*u2*v2 = 1

    whose first two lines hold for any nonsingular set and whose third is
    asserted whenever the primal conditions hold.
    """
    if ps.dual_singular:
        raise SingularSystemError("dual weights undefined: u1*v2 - u2*v1 = 0")
    bar1, bar2 = ps.eta_bar1, ps.eta_bar2
    if ps.orthogonal:
        assert bar1 * ps.u1 + bar2 * ps.u2 == 1
        assert bar1 * ps.v1 + bar2 * ps.v2 == 1
        assert bar1 * ps.u1 * ps.v1 + bar2 * ps.u2 * ps.v2 == 1
    return bar1, bar2


def dual_residuals(ps: ParameterSet) -> tuple[Rational, Rational, Rational]:
    """Residuals of the dual orthogonality system at the dual weights."""
    bar1, bar2 = dual_weights(ps)
    return (
        bar1 * ps.u1 + bar2 * ps.u2 - 1,
        bar1 * ps.v1 + bar2 * ps.v2 - 1,
        bar1 * ps.u1 * ps.v1 + bar2 * ps.u2 * ps.v2 - 1,
    )


def solve_eta_from_uv(u1, v1, u2, v2) -> tuple[Rational, Rational]:
    """The unique (eta1, eta2) solving conditions (a) and (b).

    Condition (c) is not asserted here; it holds iff the cone residual is
    zero.  The 2x2 system is singular exactly when u1*v2 - u2*v1 = 0.
    """
    u1, v1, u2, v2 = (as_rational(w) for w in (u1, v1, u2, v2))
    det = u1 * v2 - u2 * v1
    if det == 0:
        raise SingularSystemError("conditions (a) and (b) do not determine eta: u1*v2 - u2*v1 = 0")
    return (v2 - v1) / det, (u1 - u2) / det


def parameter_set_from_uv(u1, v1, u2, v2) -> ParameterSet:
    """Build a set from explicit weights, deriving eta from conditions (a), (b)."""
    eta1, eta2 = solve_eta_from_uv(u1, v1, u2, v2)
    return ParameterSet(u1=u1, v1=v1, u2=u2, v2=v2, eta1=eta1, eta2=eta2)


def complete_orthogonal_family(u1, v1, eta1) -> ParameterSet:
    """Extend (u1, v1, eta1) to a full orthogonal set.

    eta2 comes from condition (a); then (u2, v2) is the unique solution of
    the linear system formed by conditions (b) and (c).  Used by the kernel
    calibration search to sweep orthogonal families rationally.
    """
    u1, v1, eta1 = as_rational(u1), as_rational(v1), as_rational(eta1)
    if v1 == 0 or eta1 == 0 or u1 == v1:
        raise SingularSystemError("degenerate seed for family completion")
    eta2 = (1 - eta1 * u1) / v1
    if eta2 == 0:
        raise SingularSystemError("eta2 = 0: conditions (b), (c) become singular")
    u2 = (v1 - 1) / (eta1 * (v1 - u1))
    v2 = (1 - u1) / (eta2 * (v1 - u1))
    ps = ParameterSet(u1=u1, v1=v1, u2=u2, v2=v2, eta1=eta1, eta2=eta2)
    assert ps.orthogonal
    return ps
