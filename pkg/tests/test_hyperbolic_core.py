import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coflab.errors import DomainError, NotHyperbolic, PoleAtPoint
from coflab.hyperbolic_core import (
    ElementKind,
    MoebiusMap,
    PointDisc,
    PointUHP,
    apply,
    cayley,
    cayley_derivative,
    cayley_inv,
    classify,
    derivative,
    disc_point_pair_invariant,
    multiplier,
    point_pair_invariant,
)

T = MoebiusMap(1, 1, 0, 1)
S = MoebiusMap(0, -1, 1, 0)
D = MoebiusMap(2, 0, 0, 0.5)


def test_apply_examples():
    assert apply(T, 1j) == pytest.approx(1 + 1j)
    assert apply(S, 1j) == pytest.approx(1j)
    assert apply(D, 1j) == pytest.approx(4j)


def test_apply_keeps_point_type():
    out = apply(T, PointUHP(1j))
    assert isinstance(out, PointUHP)
    assert out.z == pytest.approx(1 + 1j)


def test_derivative_examples():
    assert derivative(T, 1j) == pytest.approx(1)
    assert derivative(S, 1j) == pytest.approx(-1)
    assert derivative(D, 1j) == pytest.approx(4)


def test_derivative_pole():
    with pytest.raises(PoleAtPoint):
        derivative(S, 0.0)


def test_classify_examples():
    assert classify(T) is ElementKind.PARABOLIC
    assert classify(S) is ElementKind.ELLIPTIC
    assert classify(D) is ElementKind.HYPERBOLIC
    assert classify(MoebiusMap(-1, 0, 0, -1)) is ElementKind.IDENTITY


def test_multiplier_examples():
    assert multiplier(D) == pytest.approx(4, rel=1e-14)
    g = MoebiusMap(2, 1, 1, 1)
    assert multiplier(g) == pytest.approx(6.854101966249685, rel=1e-14)
    assert multiplier(MoebiusMap(-2, -1, -1, -1)) == pytest.approx(multiplier(g), rel=1e-15)
    lam = multiplier(g)
    assert math.sqrt(lam) + 1 / math.sqrt(lam) == pytest.approx(3, rel=1e-14)
    with pytest.raises(NotHyperbolic):
        multiplier(T)


def test_point_pair_examples():
    assert point_pair_invariant(1j, 1j) == 0
    assert point_pair_invariant(1j, 0.6 + 1j) == pytest.approx(0.36 / 4)
    assert point_pair_invariant(1j, 2j) == pytest.approx(1 / 8)


def test_cayley_examples():
    assert cayley(0) == pytest.approx(1j)
    assert cayley_inv(1j) == pytest.approx(0)
    with pytest.raises(PoleAtPoint):
        cayley(1.0)


def test_cayley_transport_at_sample():
    zeta, eta = 0.3, 0.1j
    lhs = cayley_derivative(zeta) * cayley_derivative(eta) / (cayley(zeta) - cayley(eta)) ** 2
    assert lhs == pytest.approx(1 / (zeta - eta) ** 2, rel=1e-12)
    cross = cayley_derivative(zeta) * np.conj(cayley_derivative(eta)) / (cayley(zeta) - np.conj(cayley(eta))) ** 2
    assert cross == pytest.approx(-1 / (1 - zeta * np.conj(eta)) ** 2, rel=1e-12)


def test_points_validate_domain():
    with pytest.raises(DomainError):
        PointUHP(1.0 - 0.5j)
    with pytest.raises(DomainError):
        PointDisc(1.2)
    assert PointDisc(0.5j).z == 0.5j


def test_determinant_normalized_and_sign_canonical():
    g = MoebiusMap(-4, -2, -2, -2)  # det 4, normalized to [[2,1],[1,1]]
    assert abs(g.a * g.d - g.b * g.c - 1) < 1e-12
    assert (g.a, g.b, g.c, g.d) == pytest.approx((2, 1, 1, 1))
    again = MoebiusMap(g.a, g.b, g.c, g.d)
    assert again == g
    assert MoebiusMap(0, 1, -1, 0).b == 1
    with pytest.raises(DomainError):
        MoebiusMap(1, 2, 2, 1)


def test_json_roundtrip():
    g = MoebiusMap(2, 1, 1, 1)
    assert json.loads(g.to_json()) == [2.0, 1.0, 1.0, 1.0]
    assert MoebiusMap.from_json(g.to_json()) == g


# property tests

angles = st.floats(-3.0, 3.0)
coeffs = st.floats(-2.0, 2.0)


def random_map(rng):
    # product of a rotation, dilation and translation
    t, s, x = rng.uniform(-3, 3), rng.uniform(0.3, 3.0), rng.uniform(-2, 2)
    rot = MoebiusMap(math.cos(t), -math.sin(t), math.sin(t), math.cos(t))
    dil = MoebiusMap(math.sqrt(s), 0, 0, 1 / math.sqrt(s))
    tr = MoebiusMap(1, x, 0, 1)
    return tr @ dil @ rot


def random_uhp(rng):
    return complex(rng.uniform(-3, 3), rng.uniform(0.1, 3))


def test_point_pair_invariance_random():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        g = random_map(rng)
        z, w = random_uhp(rng), random_uhp(rng)
        u = point_pair_invariant(z, w)
        ug = point_pair_invariant(apply(g, z), apply(g, w))
        worst = max(worst, abs(ug - u) / max(1.0, u))
    assert worst < 1e-10


def test_chain_rule_random():
    rng = np.random.default_rng(12)
    for _ in range(300):
        g, h = random_map(rng), random_map(rng)
        z = random_uhp(rng)
        lhs = derivative(g @ h, z)
        rhs = derivative(g, apply(h, z)) * derivative(h, z)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@settings(max_examples=200, deadline=None)
@given(st.floats(2.05, 30.0), angles, st.floats(-2, 2), st.floats(0.3, 3.0))
def test_multiplier_conjugation_invariant(trace, t, x, s):
    # hyperbolic element with the given trace
    lam_half = (trace + math.sqrt(trace * trace - 4)) / 2
    g = MoebiusMap(lam_half, 0, 0, 1 / lam_half)
    conj = MoebiusMap(1, x, 0, 1) @ MoebiusMap(math.sqrt(s), 0, 0, 1 / math.sqrt(s)) @ MoebiusMap(
        math.cos(t), -math.sin(t), math.sin(t), math.cos(t)
    )
    h = conj @ g @ conj.inverse()
    assert multiplier(h) == pytest.approx(multiplier(g), rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(coeffs, coeffs, coeffs, st.floats(0.2, 3.0))
def test_canonical_sign_idempotent(a, b, c, scale):
    d_val = (1 + b * c) / a if abs(a) > 1e-3 else None
    if d_val is None:
        return
    g = MoebiusMap(a * scale, b * scale, c * scale, d_val * scale)
    first = next(v for v in (g.a, g.b, g.c, g.d) if v != 0)
    assert first > 0
    assert MoebiusMap(g.a, g.b, g.c, g.d) == g
    assert abs(g.a * g.d - g.b * g.c - 1) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(-0.95, 0.95), st.floats(-0.95, 0.95))
def test_cayley_roundtrip(x, y):
    z = complex(x, y)
    if abs(z) >= 0.97:
        return
    w = cayley(z)
    assert w.imag > 0
    assert abs(cayley_inv(w) - z) < 1e-12
    # the invariant transports to the disc form
    z2 = 0.3 - 0.2j
    u_disc = disc_point_pair_invariant(z, z2)
    assert point_pair_invariant(w, cayley(z2)) == pytest.approx(u_disc, rel=1e-9, abs=1e-12)
