import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coflab.errors import DomainError, PoleAtNonpositiveInteger, UnsupportedDegree
from coflab.specialfns import (
    RootSumKind,
    barnes_g_ln,
    bernoulli,
    double_gamma_ln,
    elliptic_constant,
    elliptic_constant_from_root_sums,
    finite_convolution_sum,
    gamma_ln,
    glaisher_ln,
    least_positive_residue,
    root_of_unity_sum,
    zeta_prime_minus_one,
)

# mpmath.loggamma at 40 digits (tools/oracles_specialfns.py)
LOGGAMMA_REF = {
    0.5: 0.5723649429247001,
    5: 3.1780538303479458,
    2.5 + 1j: 0.04810862962355502 + 0.7401435969990889j,
    -2.5: -0.056243716497674054 - 9.42477796076938j,
    0.1 + 3j: -4.23221870026056 - 0.34534020121158043j,
    30 - 4j: 70.98670294824922 - 13.549939069863965j,
    -3.7 + 0.2j: -1.6364330925624564 - 12.663282679635772j,
}

# log of mpmath.barnesg
BARNES_REF = {
    0.1: -2.2181846116046207,
    0.5: -0.5054330544896953,
    1.7: 0.046277349456604056,
    3.7: 0.3852902057046429,
    9.99: 36.04273047438541,
    10.0: 36.15946769873876,
    12.5: 72.51150933276605,
    25.0: 504.90376174341463,
    60.0: 4539.916077449396,
}

ZETA_PRIME_REF = -0.16542114370045094
GLAISHER_LN_REF = 0.24875447703378425


def test_gamma_ln_examples():
    assert gamma_ln(1) == 0
    assert gamma_ln(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-15)
    assert gamma_ln(5) == pytest.approx(math.log(24), rel=1e-15)


@pytest.mark.parametrize("z", list(LOGGAMMA_REF))
def test_gamma_ln_reference(z):
    assert abs(gamma_ln(z) - LOGGAMMA_REF[z]) < 1e-12 * max(1, abs(LOGGAMMA_REF[z]))


def test_gamma_ln_exp_matches_gamma():
    for x in [0.3, 1.5, 4.2, -0.5, -2.3]:
        assert cmath.exp(gamma_ln(x)) == pytest.approx(math.gamma(x), rel=1e-13)


@pytest.mark.parametrize("z", [0, -1, -7, 0.0 + 0j])
def test_gamma_ln_poles(z):
    with pytest.raises(PoleAtNonpositiveInteger):
        gamma_ln(z)


def test_barnes_examples():
    assert barnes_g_ln(1) == pytest.approx(0, abs=1e-13)
    assert barnes_g_ln(2) == pytest.approx(0, abs=1e-13)
    assert barnes_g_ln(3) == pytest.approx(0, abs=1e-13)
    assert barnes_g_ln(4) == pytest.approx(math.log(2), rel=1e-13)
    z = 3.7
    residual = barnes_g_ln(z + 1) - gamma_ln(z).real - barnes_g_ln(z)
    assert abs(residual) < 1e-10


@pytest.mark.parametrize("z", list(BARNES_REF))
def test_barnes_reference(z):
    assert barnes_g_ln(z) == pytest.approx(BARNES_REF[z], rel=1e-12, abs=1e-12)


def test_barnes_domain():
    with pytest.raises(DomainError):
        barnes_g_ln(0)
    with pytest.raises(DomainError):
        barnes_g_ln(-1.5)


def test_barnes_functional_equation_grid():
    for z in np.linspace(0.1, 20, 200):
        residual = barnes_g_ln(z + 1) - gamma_ln(z).real - barnes_g_ln(z)
        assert abs(residual) < 1e-9


def test_double_gamma_conventions():
    z = 4.0
    assert double_gamma_ln(z, "inverse_g") == pytest.approx(-math.log(2), rel=1e-13)
    assert double_gamma_ln(z, "gz_2pi") == pytest.approx(1.5 * math.log(2 * math.pi) - math.log(2), rel=1e-13)
    with pytest.raises(DomainError):
        double_gamma_ln(z, "nosuch")


def test_least_positive_residue():
    assert least_positive_residue(5, 7) == 2
    assert least_positive_residue(5, 10) == 5
    assert least_positive_residue(3, -1) == 2
    with pytest.raises(DomainError):
        least_positive_residue(1, 4)


@given(st.integers(2, 60), st.integers(-500, 500))
def test_least_positive_residue_property(m, k):
    a = least_positive_residue(m, k)
    assert 1 <= a <= m and (a - k) % m == 0


def test_bernoulli():
    assert bernoulli(1, 0.5) == 0
    assert bernoulli(2, 0.5) == pytest.approx(-1 / 12, rel=1e-15)
    assert bernoulli(2, 0) == pytest.approx(1 / 6, rel=1e-15)
    assert bernoulli(2, Fraction(1, 3)) == Fraction(-1, 18)
    with pytest.raises(UnsupportedDegree):
        bernoulli(3, 0.5)


def test_root_sum_examples():
    assert root_of_unity_sum(RootSumKind.FIRST_ORDER, 2, 1) == pytest.approx(-0.5, abs=1e-15)
    assert root_of_unity_sum(RootSumKind.SECOND_ORDER, 3, 1) == pytest.approx(-2 / 3, abs=1e-15)
    assert root_of_unity_sum(RootSumKind.SECOND_ORDER, 2, 2) == pytest.approx(0.25, abs=1e-15)
    for kind in RootSumKind:
        for m, n in [(2, 1), (3, 1), (2, 2), (7, 4)]:
            closed = root_of_unity_sum(kind, m, n)
            direct = root_of_unity_sum(kind, m, n, direct=True)
            assert abs(closed - direct) < 1e-12
    with pytest.raises(DomainError):
        root_of_unity_sum(RootSumKind.FIRST_ORDER, 1, 1)


def test_root_sum_closed_forms_exact():
    # closed forms come back as exact rationals
    assert root_of_unity_sum(RootSumKind.SECOND_ORDER, 3, 1) == Fraction(-2, 3)
    assert root_of_unity_sum(RootSumKind.FIRST_ORDER, 2, 1) == Fraction(-1, 2)


def test_root_sums_grid():
    worst_diff = 0.0
    worst_imag = 0.0
    for m in range(2, 51):
        for n in range(-3, 21):
            for kind in RootSumKind:
                closed = float(root_of_unity_sum(kind, m, n))
                direct = root_of_unity_sum(kind, m, n, direct=True)
                worst_diff = max(worst_diff, abs(closed - direct) / max(1.0, abs(closed)))
                worst_imag = max(worst_imag, abs(direct.imag))
    assert worst_diff < 1e-12
    assert worst_imag < 1e-12


def test_convolution_examples():
    assert finite_convolution_sum("SK", 2, 2, 1) == pytest.approx(1, abs=1e-14)
    assert finite_convolution_sum("SS", 2, 2, 1) == pytest.approx(2, abs=1e-14)
    w = cmath.exp(2j * math.pi / 3)
    assert finite_convolution_sum("SK", 6, 3, 1) == pytest.approx(-4 * w * w, abs=1e-13)
    with pytest.raises(DomainError):
        finite_convolution_sum("SK", 5, 2, 1)
    with pytest.raises(DomainError):
        finite_convolution_sum("XX", 4, 2, 1)


def test_convolution_grid():
    worst = 0.0
    for m in range(2, 51):
        for k in range(m, 10 * m + 1, m):
            for ell in range(1, m):
                for kind in ("SK", "SS"):
                    closed = finite_convolution_sum(kind, k, m, ell)
                    direct = finite_convolution_sum(kind, k, m, ell, direct=True)
                    worst = max(worst, abs(closed - direct) / max(1.0, abs(closed)))
    assert worst < 1e-12


def test_elliptic_constant_examples():
    assert elliptic_constant(2, 2) == Fraction(-3, 16)
    assert elliptic_constant(3, 1) == Fraction(1, 9)
    for m in range(2, 40):
        assert elliptic_constant(m, 1) == Fraction(m * m - 1, 24 * m)
    with pytest.raises(DomainError):
        elliptic_constant(1, 2)
    with pytest.raises(DomainError):
        elliptic_constant(3, 0)


def test_elliptic_constant_dual_routes():
    worst = 0.0
    for m in range(2, 31):
        for n in range(1, 13):
            exact = float(elliptic_constant(m, n))
            other = elliptic_constant_from_root_sums(m, n)
            worst = max(worst, abs(exact - other) / max(1.0, abs(exact)))
    assert worst < 1e-12


def test_zeta_prime():
    v = zeta_prime_minus_one()
    assert v < 0
    assert v == pytest.approx(ZETA_PRIME_REF, rel=1e-10)
    assert 1 / 12 - v == pytest.approx(glaisher_ln(), rel=1e-14)
    assert glaisher_ln() == pytest.approx(GLAISHER_LN_REF, rel=1e-12)
