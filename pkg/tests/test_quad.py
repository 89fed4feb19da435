import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coflab.errors import DomainError, NonFiniteIntegrand, NotConverged
from coflab.quad import (
    QuadResult,
    QuadSpec,
    Transform,
    gauss_kronrod_nodes,
    integrate_1d,
    integrate_disc,
    integrate_line_osc,
    integrate_real_line,
)


def within(res, exact):
    return abs(res.value - exact) <= max(res.err_estimate, 1e-300) + 1e-15 * abs(exact)


def test_kronrod_rule_exact_for_low_degree():
    x, wk, wg = gauss_kronrod_nodes()
    assert len(x) == 21
    for deg in range(32):
        exact = 2.0 / (deg + 1) if deg % 2 == 0 else 0.0
        assert wk @ x ** deg == pytest.approx(exact, abs=1e-14)
    # embedded Gauss rule uses every other node and is exact to degree 19
    for deg in range(20):
        exact = 2.0 / (deg + 1) if deg % 2 == 0 else 0.0
        assert wg @ x[1::2] ** deg == pytest.approx(exact, abs=1e-14)


def test_spec_validation():
    with pytest.raises(DomainError):
        QuadSpec(rel_tol=0)
    with pytest.raises(DomainError):
        QuadSpec(abs_tol=-1)
    with pytest.raises(DomainError):
        QuadSpec(max_evals=10)


def test_exponential_moment():
    spec = QuadSpec(rel_tol=1e-12, transform=Transform.SEMI_INF_EXP, decay_rate=4 * math.pi)
    res = integrate_1d(lambda y: np.exp(-4 * math.pi * y) * y ** 4, 0, math.inf, spec)
    exact = 24 / (4 * math.pi) ** 5
    assert res.converged
    assert res.value == pytest.approx(exact, rel=1e-11)
    assert within(res, exact)


def test_exponential_moment_rational_transform():
    spec = QuadSpec(rel_tol=1e-11)
    res = integrate_1d(lambda y: np.exp(-4 * math.pi * y) * y ** 4, 0, math.inf, spec)
    assert res.value == pytest.approx(24 / (4 * math.pi) ** 5, rel=1e-10)


def test_power_decay_moment():
    res = integrate_1d(lambda y: y / (y + 1) ** 3, 0, math.inf, QuadSpec(rel_tol=1e-12))
    assert res.value == pytest.approx(0.5, rel=1e-11)
    assert within(res, 0.5)


def test_log_endpoint_with_hint():
    spec = QuadSpec(rel_tol=1e-12, singular_hints=(0.0,))
    res = integrate_1d(lambda x: np.log(1 / x), 0, 1, spec)
    assert res.converged
    assert res.value == pytest.approx(1.0, rel=1e-11)


def test_interior_singularity_hint():
    # |x - 0.3|^{-1/2} on [0, 1]
    spec = QuadSpec(rel_tol=1e-10, singular_hints=(0.3,))
    res = integrate_1d(lambda x: np.abs(x - 0.3) ** -0.5, 0, 1, spec)
    exact = 2 * (math.sqrt(0.3) + math.sqrt(0.7))
    assert res.value == pytest.approx(exact, rel=1e-9)


def test_complex_integrand():
    res = integrate_1d(lambda x: np.exp(1j * x), 0, math.pi, QuadSpec())
    assert res.value == pytest.approx(2j, abs=1e-12)


def test_vector_valued_batch():
    # several integrands at once, shape (3, N)
    res = integrate_1d(lambda x: np.array([x, x ** 2, np.sin(x)]), 0, 1, QuadSpec(rel_tol=1e-12))
    assert np.allclose(res.value, [0.5, 1 / 3, 1 - math.cos(1)], rtol=1e-12)


def test_nonfinite_raises():
    with pytest.raises(NonFiniteIntegrand):
        integrate_1d(lambda x: np.where(x > 0.5, np.nan, 1.0), 0, 1, QuadSpec())


def test_budget_exhaustion():
    spec = QuadSpec(rel_tol=1e-14, abs_tol=1e-300, max_evals=1000)
    with pytest.raises(NotConverged) as info:
        integrate_1d(lambda x: np.sin(1 / x), 1e-6, 1, spec)
    best = info.value.result
    assert isinstance(best, QuadResult) and not best.converged
    res = integrate_1d(lambda x: np.sin(1 / x), 1e-6, 1, spec, raise_on_failure=False)
    assert not res.converged and res.err_estimate > 0


def test_real_line_fold():
    res = integrate_real_line(lambda x: 1 / (1 + x * x), QuadSpec(rel_tol=1e-12))
    assert res.value == pytest.approx(math.pi, rel=1e-11)


def test_disc_examples():
    spec = QuadSpec(rel_tol=1e-11)
    res = integrate_disc(lambda w: (1 - abs(w) ** 2) ** 2, spec)
    assert res.value == pytest.approx(math.pi / 3, rel=1e-10)
    for m, n in [(1, 0), (2, 3), (0, 4)]:
        res = integrate_disc(lambda w: w ** m * np.conj(w) ** n, spec)
        assert abs(res.value) < 1e-12
    for k in range(5):
        exact = math.pi * (1 / (k + 1) - 2 / (k + 2) + 1 / (k + 3))
        res = integrate_disc(lambda w: abs(w) ** (2 * k) * (1 - abs(w) ** 2) ** 2, spec)
        assert res.value == pytest.approx(exact, rel=1e-10)


def test_disc_log_hint_at_origin():
    # int_D log(1/|w|^2) d^2w = pi
    res = integrate_disc(lambda w: np.log(1 / abs(w) ** 2), QuadSpec(rel_tol=1e-10), hint=0j)
    assert res.value == pytest.approx(math.pi, rel=1e-9)


def test_disc_log_hint_off_center():
    # mean value property: int_D log|w - p| d^2w = pi log|p| ... only for |p|>1; use |p|<1:
    # the logarithmic potential of the unit disc is pi(|p|^2 - 1)/2 inside
    p = 0.4 + 0.2j
    res = integrate_disc(lambda w: np.log(abs(w - p)), QuadSpec(rel_tol=1e-10), hint=p)
    assert res.value == pytest.approx(math.pi * (abs(p) ** 2 - 1) / 2, rel=1e-9)


def test_disc_principal_value_off_center():
    # int_D (w - p)^{-2} d^2w vanishes as a principal value; the disc part
    # removed and the remainder oscillates in angle
    p = 0.3 - 0.1j
    res = integrate_disc(lambda w, d: 1 / d ** 2, QuadSpec(rel_tol=1e-10, abs_tol=1e-10), hint=p, local=True)
    assert abs(res.value) < 1e-9


def test_line_osc_residues():
    spec = QuadSpec(rel_tol=1e-10)
    res = integrate_line_osc(lambda u: 1 / (u - 1j) ** 2, 1.0, spec)
    assert res.value == pytest.approx(-4 * math.pi ** 2 * math.exp(-2 * math.pi), rel=1e-7)
    # the value is ~1e-9 against an O(1) integrand on the real axis, so move the
    # line up towards the pole where the integral is well conditioned
    res = integrate_line_osc(lambda u: 1 / (u - 2j) ** 2, 2.0, spec, shift=1.5)
    assert res.value == pytest.approx(-8 * math.pi ** 2 * math.exp(-8 * math.pi), rel=1e-6)


def test_line_osc_shifted_contour():
    # shifting into the analytic strip below the pole leaves the value unchanged
    spec = QuadSpec(rel_tol=1e-10)
    res = integrate_line_osc(lambda u: 1 / (u - 1j) ** 2, 1.0, spec, shift=0.5)
    assert res.value == pytest.approx(-4 * math.pi ** 2 * math.exp(-2 * math.pi), rel=1e-7)


def test_line_osc_rejects_zero_frequency():
    with pytest.raises(DomainError):
        integrate_line_osc(lambda u: 1 / (u - 1j) ** 2, 0.0, QuadSpec())


def test_double_pole_line_integral():
    zeta, eta_bar, y = 0.3 + 0.5j, 0.1 - 0.4j, 0.7
    f = lambda x: 1 / ((zeta - x + 1j * y) ** 2 * (zeta - eta_bar) ** 2 * (x + 1j * y - eta_bar) ** 2)
    res = integrate_real_line(f, QuadSpec(rel_tol=1e-12))
    exact = -4j * math.pi / ((zeta - eta_bar + 2j * y) ** 3 * (zeta - eta_bar) ** 2)
    assert abs(res.value - exact) < 1e-9 * abs(exact)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 5.0), st.integers(0, 6))
def test_refinement_stays_within_error(rate, power):
    f = lambda y: np.exp(-rate * y) * y ** power
    spec = QuadSpec(rel_tol=1e-8, transform=Transform.SEMI_INF_EXP, decay_rate=rate)
    coarse = integrate_1d(f, 0, math.inf, spec)
    fine = integrate_1d(f, 0, math.inf, spec.refined(10))
    exact = math.factorial(power) / rate ** (power + 1)
    assert coarse.converged and fine.converged
    assert abs(fine.value - coarse.value) <= coarse.err_estimate + 1e-15 * abs(exact)
    assert within(coarse, exact)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5), st.integers(0, 6), st.sampled_from([0.5, 2.0]))
def test_moment_identity(r, extra, a):
    k = r + 2 + extra
    res = integrate_1d(lambda y: y ** r / (y + a) ** k, 0, math.inf, QuadSpec(rel_tol=1e-11))
    exact = math.factorial(r) * math.factorial(k - r - 2) / (a ** (k - r - 1) * math.factorial(k - 1))
    assert res.value == pytest.approx(exact, rel=1e-9)
