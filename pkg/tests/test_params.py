import random
from fractions import Fraction

import pytest

import krawtchouk2 as k2
from krawtchouk2.errors import ParameterError, SingularSystemError
from krawtchouk2.panels import random_pquadruple


def test_from_p_reference_values(ps1234):
    assert ps1234.u1 == Fraction(6, 5)
    assert ps1234.v1 == Fraction(14, 15)
    assert ps1234.u2 == Fraction(9, 10)
    assert ps1234.v2 == Fraction(21, 20)
    assert ps1234.eta1 == Fraction(5, 18)
    assert ps1234.eta2 == Fraction(5, 7)
    assert ps1234.orthogonal and ps1234.eta_valid and not ps1234.boundary


def test_from_p_boundary_case():
    ps = k2.from_p(k2.PQuadruple(1, 1, 1, 1))
    assert ps.u1 == ps.v1 == ps.u2 == ps.v2 == 1
    assert ps.eta1 == ps.eta2 == Fraction(1, 2)
    assert ps.orthogonal
    assert ps.boundary and not ps.eta_valid


def test_delta_singular_flagging():
    quad = k2.PQuadruple(2, 4, 6, 12)
    assert quad.delta == 0 and quad.delta_singular
    ps = k2.from_p(quad)  # the weights themselves are still well defined
    assert ps.orthogonal


def test_pquadruple_validation_and_parse():
    with pytest.raises(ParameterError):
        k2.PQuadruple(1, -2, 3, 4)
    with pytest.raises(ParameterError):
        k2.PQuadruple.parse("1,2,3")
    quad = k2.PQuadruple.parse("1/2, 3, 5/7, 4")
    assert quad.p3 == Fraction(5, 7)


def test_conditions_zero_on_parametrized_sets(ps1234):
    assert k2.check_conditions_1_10(ps1234) == (0, 0, 0)


def test_condition_residual_linear_in_u1(ps1234):
    perturbed = k2.ParameterSet(ps1234.u1 + 1, ps1234.v1, ps1234.u2, ps1234.v2,
                                ps1234.eta1, ps1234.eta2)
    res_a, res_b, _ = k2.check_conditions_1_10(perturbed)
    assert res_a == ps1234.eta1
    assert res_b == 0
    assert not perturbed.orthogonal


def test_all_ones_conditions_collapse():
    ps = k2.ParameterSet(1, 1, 1, 1, Fraction(1, 3), Fraction(2, 3))
    assert k2.check_conditions_1_10(ps) == (0, 0, 0)


def test_cone_residual_reference(ps1234):
    assert k2.check_cone_2_7(ps1234) == 0
    # U1 = 1/6, V2 = 1/21, U2 = -1/9, V1 = -1/14: both products are 1/126
    assert (1 - 1 / ps1234.u1) * (1 - 1 / ps1234.v2) == Fraction(1, 126)


def test_cone_residual_nonzero_case():
    ps = k2.ParameterSet(2, 2, 2, 3, Fraction(1, 4), Fraction(1, 4))
    assert k2.check_cone_2_7(ps) == Fraction(1, 12)


def test_cone_rejects_zero_weight():
    ps = k2.ParameterSet(0, 2, 2, 3, Fraction(1, 4), Fraction(1, 4))
    with pytest.raises(ParameterError):
        k2.check_cone_2_7(ps)


def test_dual_weights_reference(ps1234):
    assert ps1234.dual_det == Fraction(21, 50)
    bar1, bar2 = k2.dual_weights(ps1234)
    assert (bar1, bar2) == (Fraction(5, 14), Fraction(40, 63))
    assert bar1 * ps1234.u1 + bar2 * ps1234.u2 == 1
    assert 1 - bar1 - bar2 == Fraction(1, 126)
    assert k2.dual_residuals(ps1234) == (0, 0, 0)


def test_dual_weights_singular():
    ps = k2.ParameterSet(1, 1, 1, 1, Fraction(1, 3), Fraction(1, 3))
    with pytest.raises(SingularSystemError):
        k2.dual_weights(ps)


def test_solve_eta_reference(ps1234):
    eta = k2.solve_eta_from_uv(ps1234.u1, ps1234.v1, ps1234.u2, ps1234.v2)
    assert eta == (Fraction(5, 18), Fraction(5, 7))
    with pytest.raises(SingularSystemError):
        k2.solve_eta_from_uv(1, 1, 1, 1)


def test_both_closed_form_eta_expressions_agree(ps1234):
    u1, v1, u2, v2 = ps1234.weights()
    first = (v2 - 1) / (u1 * (v2 - u2))
    second = -(1 - v1) / (u2 * (v1 - u1))
    assert first == second == Fraction(5, 18)
    eta2_first = (1 - u2) / (v1 * (v2 - u2))
    eta2_second = (1 - u1) / (v2 * (v1 - u1))
    assert eta2_first == eta2_second == Fraction(5, 7)


def test_parametrization_scale_invariance():
    rng = random.Random(11)
    for _ in range(25):
        quad = random_pquadruple(rng)
        c = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        assert k2.from_p(quad.scaled(c)) == k2.from_p(quad)


def test_random_quadruples_satisfy_conditions_and_cone():
    rng = random.Random(23)
    for _ in range(50):
        ps = k2.from_p(random_pquadruple(rng))
        assert k2.check_conditions_1_10(ps) == (0, 0, 0)
        assert k2.check_cone_2_7(ps) == 0
        if not ps.dual_singular:
            assert k2.dual_residuals(ps) == (0, 0, 0)


def test_complete_orthogonal_family_matches_parametrization(ps1234):
    ps = k2.complete_orthogonal_family(ps1234.u1, ps1234.v1, ps1234.eta1)
    assert ps == ps1234


def test_parameter_set_json_keys(ps1234):
    doc = ps1234.to_json_dict()
    for key in ("u1", "v1", "u2", "v2", "eta1", "eta2", "dualDet", "etaBar1", "etaBar2"):
        assert key in doc
    assert doc["dualDet"] == "21/50"
    assert doc["etaBar1"] == "5/14"
