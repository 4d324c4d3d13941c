from fractions import Fraction

import pytest

import krawtchouk2 as k2


@pytest.fixture(scope="session")
def p1234():
    return k2.PQuadruple(1, 2, 3, 4)


@pytest.fixture(scope="session")
def ps1234(p1234):
    return k2.from_p(p1234)


@pytest.fixture(scope="session")
def table1234_n2(ps1234):
    return k2.PolynomialTable.build(ps1234, 2)


@pytest.fixture(scope="session")
def table1234_n3(ps1234):
    return k2.PolynomialTable.build(ps1234, 3)


@pytest.fixture(scope="session")
def hand_kernel():
    """An interior kernel with rational slot spectrum (1/2, 7/11) whose
    eigenfamily is (u1,v1,u2,v2) = (8,-6,2,3)-style with eta = (1/4, 1/6)."""
    return k2.KernelParameters(Fraction(2, 3), Fraction(3, 5), Fraction(5, 44), Fraction(1, 11), 3)
