"""Identity, hyperbolic, parabolic and elliptic contributions to the second variation of log det N_n.

Each contribution is built from the intermediate terms of its derivation, so
that the final closed forms become checkable identities. Parabolic pieces
are single y-integrals with the sum over the cusp translations l moved inside
the integrand; elliptic pieces are radial integrals over [0, 1] after the
substitution r^2 -> r.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import special

from .beltrami import (
    CuspCoeffs,
    EllipticCoeffs,
    cubic_profile,
    cubic_profile_deriv,
    cusp_zero_mode_exponential,
    elliptic_zero_mode_poly,
    eval_cusp,
    eval_elliptic,
    square_sum_profile,
    tz_cusp_norm,
    tz_elliptic_norm,
)
from .errors import DomainError
from .quad import QuadResult, QuadSpec, Transform, integrate_1d, integrate_half_strip, \
    integrate_real_line, integrate_strip

DEFAULT_ELL_MAX = 500
# translations per block when summing over l inside an integrand
_ELL_BLOCK = 128


def _check_weight(n, least):
    if int(n) != n or n < least:
        raise DomainError(f"weight n must be an integer >= {least}, got {n!r}")
    return int(n)


# ---------------------------------------------------------------- identity


def identity_coefficients(n: int):
    """Coefficients of the WP pairing in the X+Y part and in the Z part."""
    n = _check_weight(n, 1)
    return -(3 * n - 2) / (12 * math.pi), -(n - 1) * (2 * n - 1) / (4 * math.pi)


def identity_contribution(n: int, wp: float) -> float:
    n = _check_weight(n, 1)
    if wp < 0:
        raise DomainError("a WP norm cannot be negative")
    return -(6 * n * n - 6 * n + 1) / (12 * math.pi) * wp


# ---------------------------------------------------------------- parabolic


@dataclass
class ParabolicTerms:
    X: float
    Y: float
    Z1: float
    Z2: float
    total: float
    err: float
    tail: float
    ell_max: int
    meta: dict = field(default_factory=dict)

    def report(self):
        return [{"term": name, "value": getattr(self, name)} for name in ("X", "Y", "Z1", "Z2", "total")]


def _ell_sum(y, ell_max, power, ell_weight, times_2i=False):
    """sum_{l=1}^{L} l^-ell_weight * 2 Re[c (l + 2iy)^-power], c = 2i or 1.

    Adding the l and -l terms gives twice the real part of the l term.
    """
    y = np.asarray(y, dtype=float)
    out = np.zeros(y.shape)
    for start in range(1, ell_max + 1, _ELL_BLOCK):
        ell = np.arange(start, min(start + _ELL_BLOCK, ell_max + 1), dtype=float)
        w = (ell[:, None] + 2j * y[None, :]) ** (-power)
        if times_2i:
            w = 2j * w
        out += 2 * np.sum(w.real * ell[:, None] ** (-ell_weight), axis=0)
    return out


def _exp_spec(rate, rel_tol, abs_tol=1e-300):
    # mapping at half the decay rate leaves a zero at the far end of the
    # parameter interval; at the full rate y^p e^-ay maps to log^p(1-t), which
    # stalls the error estimate near t = 1
    return QuadSpec(rel_tol=rel_tol, abs_tol=abs_tol, transform=Transform.SEMI_INF_EXP, decay_rate=rate / 2)


def _moment(power, rate):
    """int_0^inf y^power e^(-rate y) dy."""
    return math.gamma(power + 1) / rate ** (power + 1)


def parabolic_terms(n: int, c: CuspCoeffs, ell_max: int = DEFAULT_ELL_MAX, rel_tol=1e-11) -> ParabolicTerms:
    n = _check_weight(n, 2)
    if ell_max < 1:
        raise DomainError("ell_max must be positive")
    sgn = (-1) ** (n - 1)
    p4 = 2 ** (2 * n - 2)
    pi = math.pi
    X = Y = Z2 = Z2_zm = 0.0
    err = tail = 0.0
    results = {}

    def hz(s):
        return float(special.zeta(s, ell_max + 1))

    for k, b in c.items():
        weight = abs(b) ** 2
        if weight == 0:
            continue
        a = 4 * pi * k
        # integrands partly cancel; an absolute floor at the size of y^2n e^-ay
        spec = _exp_spec(a, rel_tol, 1e-13 * _moment(2 * n, a))

        def fx(y):
            return np.exp(-a * y) * y ** (2 * n) * _ell_sum(y, ell_max, 2 * n - 2, 2)

        def fy1(y):
            return np.exp(-a * y) * y ** (2 * n + 1) * _ell_sum(y, ell_max, 2 * n - 1, 2, times_2i=True)

        def fy2(y):
            return np.exp(-a * y) * y ** (2 * n + 1) * _ell_sum(y, ell_max, 2 * n - 1, 1)

        def fz2(y):
            poly = 1 + a * y - 0.5 * a * a * y * y
            return np.exp(-a * y) * y ** (2 * n) * poly * _ell_sum(y, ell_max, 2 * n - 2, 2)

        cx = sgn * p4 * n / (4 * pi ** 3) * weight / k ** 2
        cy1 = -sgn * p4 * (n - 1) / (4 * pi ** 3) * weight / k ** 2
        cy2 = sgn * p4 * (n - 1) / (2 * pi ** 2) * weight / k
        cz2 = sgn * p4 / (8 * pi ** 3) * weight / k ** 2
        rx, ry1, ry2, rz2 = (integrate_1d(f, 0, math.inf, spec) for f in (fx, fy1, fy2, fz2))
        results[k] = {"X": rx, "Y1": ry1, "Y2": ry2, "Z2": rz2}
        X += cx * rx.value.real
        Y += cy1 * ry1.value.real + cy2 * ry2.value.real
        Z2 += cz2 * rz2.value.real
        err += (abs(cx) * rx.err_estimate + abs(cy1) * ry1.err_estimate
                + abs(cy2) * ry2.err_estimate + abs(cz2) * rz2.err_estimate)
        # |2 Re (l + 2iy)^-p| <= 2 l^-p for the dropped l > L
        tail += 2 * (abs(cx) * _moment(2 * n, a) * hz(2 * n)
                     + abs(cy1) * 2 * _moment(2 * n + 1, a) * hz(2 * n + 1)
                     + abs(cy2) * _moment(2 * n + 1, a) * hz(2 * n)
                     + abs(cz2) * (_moment(2 * n, a) + a * _moment(2 * n + 1, a)
                                   + 0.5 * a * a * _moment(2 * n + 2, a)) * hz(2 * n))

    # second route for Z2: the exponential part of the zero mode inserted directly
    def fz2_direct(y):
        y = np.asarray(y, dtype=float)
        beta = cusp_zero_mode_exponential(c, y)
        return y ** (2 * n - 2) * beta * _ell_sum(y, ell_max, 2 * n, 0)

    rates = [4 * pi * k for k, b in c.items() if b != 0]
    if rates:
        a = min(rates)
        r = integrate_1d(fz2_direct, 0, math.inf, _exp_spec(a, rel_tol, 1e-13 * _moment(2 * n, a)))
        Z2_zm = sgn * p4 * (n - 1) * (2 * n - 1) / pi * r.value.real
        results["Z2_zero_mode"] = r

    tz = tz_cusp_norm(c)
    Z1 = pi / 9 * tz
    # first-order part of the zero mode; the l-dependence scales out as l^-2
    one = integrate_1d(lambda y: y ** (2 * n - 3) / (1 + 2j * y) ** (2 * n), 0, math.inf,
                       QuadSpec(rel_tol=1e-13, abs_tol=1e-300))
    Z1_alpha = sgn * 2 ** (2 * n - 1) * (n - 1) * (2 * n - 1) / (3 * pi) * tz * 2 * one.value.real * pi ** 2 / 6

    total = X + Y + Z1 + Z2
    meta = {"integrals": results, "Z1_alpha_route": Z1_alpha, "Z2_zero_mode_route": Z2_zm}
    return ParabolicTerms(X, Y, Z1, Z2, total, err, tail, ell_max, meta)


def parabolic_weight_one(c: CuspCoeffs, spec: QuadSpec | None = None):
    """(y-integral route, closed form) of the n=1 parabolic X term."""
    route = 0.0
    for k, b in c.items():
        if b == 0:
            continue
        a = 4 * math.pi * k
        r = integrate_1d(lambda y: y * y * np.exp(-a * y), 0, math.inf, spec or _exp_spec(a, 1e-13))
        route += abs(b) ** 2 / k ** 2 * r.value.real
    route /= 12 * math.pi
    closed = math.fsum(abs(b) ** 2 / k ** 5 for k, b in c.items()) / (384 * math.pi ** 4)
    return route, closed


# ---------------------------------------------------------------- elliptic


@dataclass
class EllipticTerms:
    X: complex
    Y: complex
    Z: complex
    A0: complex
    B0: complex
    C0: complex
    total: complex
    err: float
    meta: dict = field(default_factory=dict)

    @property
    def boundary(self):
        return self.A0 + self.B0 + self.C0

    def report(self):
        return [{"term": name, "value": getattr(self, name)}
                for name in ("X", "Y", "Z", "A0", "B0", "C0", "total")]


def _root(m, ell):
    return cmath.exp(2j * math.pi * ell / m)


def _radial(f, rel_tol):
    return integrate_1d(f, 0.0, 1.0, QuadSpec(rel_tol=rel_tol, abs_tol=1e-15))


def elliptic_terms(n: int, e: EllipticCoeffs, rel_tol=1e-13) -> EllipticTerms:
    n = _check_weight(n, 2)
    m = e.m
    data = [(k, abs(v) ** 2) for k, v in e.items() if v != 0]
    X = Y = Z = Z_zm = 0j
    err = 0.0
    a0 = elliptic_zero_mode_poly(e)
    for ell in range(1, m):
        w = _root(m, ell)
        wn = w ** n
        d1 = 1 - w
        d2 = d1 * d1

        def fx(r, w=w):
            s = sum(k * (k ** 3 - k) * c * r ** (k - 2) for k, c in data)
            return (1 - r) ** (2 * n) / (1 - w * r) ** (2 * n - 2) * s

        def fy(r, w=w):
            s = sum((k ** 3 - k) * c * (k * (k - 1) - k * (k + 1) * w) * r ** (k - 2) for k, c in data)
            return (1 - r) ** (2 * n + 1) / (1 - w * r) ** (2 * n - 1) * s

        def fz(r, w=w):
            s = sum(k * c * (square_sum_profile(k, r) - k * (k - 1) ** 2 / 4 * r ** (k - 1)) for k, c in data)
            return (1 - r) ** (2 * n) / (1 - w * r) ** (2 * n) * s

        def fz_zero_mode(r, w=w):
            t = r * r
            return (1 - t) ** (2 * n - 2) / (1 - w * t) ** (2 * n) * a0(r) * r

        cx = -n / (4 * m) * wn / d2
        cy = -(n - 1) / (8 * m) * wn / d2
        cz = -(n - 1) * (2 * n - 1) / (2 * m) * wn
        cz0 = -2 * (n - 1) * (2 * n - 1) / m * wn
        if data:
            rx, ry, rz, rz0 = (_radial(f, rel_tol) for f in (fx, fy, fz, fz_zero_mode))
            X += cx * rx.value
            Y += cy * ry.value
            Z += cz * rz.value
            Z_zm += cz0 * rz0.value
            err += abs(cx) * rx.err_estimate + abs(cy) * ry.err_estimate + abs(cz) * rz.err_estimate

    s1 = sum(_root(m, ell) ** n / (1 - _root(m, ell)) for ell in range(1, m))
    s2 = sum(_root(m, ell) ** n / (1 - _root(m, ell)) ** 2 for ell in range(1, m))
    A0 = -(n - 1) / (2 * m) * s1 * sum(k * c * float(cubic_profile(k, 0.0)) for k, c in data)
    B0 = -1 / (4 * m) * s2 * sum(k * c * float(cubic_profile(k, 0.0) + cubic_profile_deriv(k, 0.0)) for k, c in data)
    chi2 = abs(e.chi.get(2, 0)) ** 2
    # boundary term of the k=2 mode only
    C0 = -1 / (4 * m) * s2 * 2 ** 3 * (2 - 1) * chi2 if chi2 else 0
    total = X + Y + Z
    return EllipticTerms(X, Y, Z, A0, B0, C0, total, err, {"Z_zero_mode_route": Z_zm})


def elliptic_weight_one(e: EllipticCoeffs):
    """(radial route, closed form) of the n=1 elliptic X term."""
    m = e.m
    s = sum(_root(m, ell) / (1 - _root(m, ell)) ** 2 for ell in range(1, m))
    # int_0^1 r^(k-2) (1-r)^2 dr = 2 / ((k-1) k (k+1))
    radial = sum(k * (k ** 3 - k) * abs(v) ** 2 * Fraction(2, (k - 1) * k * (k + 1)) for k, v in e.items())
    route = (-1 / (4 * m) * s * float(radial)).real
    closed = (m * m - 1) / (24 * m) * tz_elliptic_norm(e)
    return route, closed


def elliptic_x_radial(n: int, e: EllipticCoeffs, ell: int, rel_tol=1e-13) -> complex:
    """The l-th summand of the elliptic X term from its radial form."""
    m = e.m
    w = _root(m, ell)
    data = [(k, abs(v) ** 2) for k, v in e.items()]

    def f(r):
        s = sum(k * (k ** 3 - k) * c * r ** (k - 2) for k, c in data)
        return (1 - r) ** (2 * n) / (1 - w * r) ** (2 * n - 2) * s

    return -n / (4 * m) * w ** n / (1 - w) ** 2 * _radial(f, rel_tol).value


def _polar_rule(radial, angular):
    x, wx = np.polynomial.legendre.leggauss(radial)
    r = 0.5 * (x + 1)
    th = 2 * math.pi * np.arange(angular) / angular
    z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    wt = (0.5 * wx[:, None] * r[:, None] * np.full(angular, 2 * math.pi / angular)[None, :]).ravel()
    return z, wt


def elliptic_x_direct(n: int, e: EllipticCoeffs, ell: int, radial=32, angular=48, chunk=512):
    """The same summand as a 4-D integral over two discs.

    Tensor rule (Gauss-Legendre in radius, trapezoid in angle) on both discs;
    returns (value, difference from the rule with half the nodes).
    """
    m = e.m
    w = _root(m, ell)

    def run(nr, na):
        z, wz = _polar_rule(nr, na)
        mu = eval_elliptic(e, z)
        weight_z = wz * mu * (1 - np.abs(z) ** 2) ** (2 * n - 2) / (1 - w * np.abs(z) ** 2) ** (2 * n - 2)
        conj_mu = np.conj(mu) * wz
        total = 0j
        for i in range(0, z.size, chunk):
            zz = z[i:i + chunk, None]
            p = zz * np.conj(z)[None, :]
            ker = 1 / ((1 - p) ** 2 * (1 - w * p) ** 2)
            total += np.sum(weight_z[i:i + chunk, None] * ker * conj_mu[None, :])
        return -n / (math.pi ** 2 * m) * w ** n * total

    fine = run(radial, angular)
    coarse = run(max(2, radial // 2), max(4, angular // 2))
    return fine, abs(fine - coarse)


# ---------------------------------------------------------------- hyperbolic


def hyperbolic_class_integral(n: int, lam: float, rel_tol=1e-12):
    """(integral, closed form) of one hyperbolic class term at multiplier lam."""
    n = _check_weight(n, 2)
    if not lam > 1:
        raise DomainError("multiplier must exceed 1")

    def f(y):
        return y ** (2 * n - 3) * (2 * y + 1) / (2 * lam * y + lam - 1) ** (2 * n + 1)

    r = integrate_1d(f, 0, math.inf, QuadSpec(rel_tol=rel_tol, abs_tol=1e-300,
                                              transform=Transform.SEMI_INF_RATIONAL))
    integral = 2 ** (2 * n - 1) * n * (n - 1) * (2 * n - 1) * lam ** n * (lam - 1) * r.value.real
    return integral, local_zeta_weight(n, lam, 1)


def moment_integral(r: int, k: int, a: float, rel_tol=1e-12):
    """(quadrature, closed form) of int_0^inf y^r / (y + a)^k dy."""
    if k < r + 2:
        raise DomainError("the integral diverges unless k >= r + 2")
    res = integrate_1d(lambda y: y ** r / (y + a) ** k, 0, math.inf,
                       QuadSpec(rel_tol=rel_tol, abs_tol=1e-300, transform=Transform.SEMI_INF_RATIONAL))
    closed = math.factorial(r) * math.factorial(k - r - 2) / (a ** (k - r - 1) * math.factorial(k - 1))
    return res.value.real, closed


def local_zeta_weight(n: int, lam: float, ell: int) -> float:
    """Weight of the l-th power of a primitive class of multiplier lam."""
    # (n-1) lam^(l(1-n)) / (lam^l - 1) + lam^(l(2-n)) / (lam^l - 1)^2 in terms of x = lam^-l
    x = lam ** (-ell)
    return x ** n * ((n - 1) / (1 - x) + 1 / (1 - x) ** 2)


@dataclass
class LocalZetaVariation:
    value: float
    tail: float
    terms: int


def local_zeta_variation(n: int, lam: float, ldot: float, ell_max: int = 200) -> LocalZetaVariation:
    """Variation of log prod_k (1 - lam^(-k-n)) when log lam moves by ldot."""
    n = _check_weight(n, 2)
    if not lam > 1:
        raise DomainError("multiplier must exceed 1")
    terms = [local_zeta_weight(n, lam, ell) for ell in range(1, ell_max + 1)]
    # consecutive weights shrink at least by lam^-n
    tail = local_zeta_weight(n, lam, ell_max + 1) / (1 - lam ** (-n)) * abs(ldot)
    return LocalZetaVariation(math.fsum(terms) * ldot, tail, ell_max)


def multiplier_variation(f, lam0: float, spec: QuadSpec | None = None) -> QuadResult:
    """(1/pi) int over 1 < Im z < lam0 of f(z) / z^2."""
    if not lam0 > 1:
        raise DomainError("multiplier must exceed 1")
    spec = spec or QuadSpec(rel_tol=1e-10, abs_tol=1e-14)
    res = integrate_strip(lambda z: f(z) / z ** 2, 1.0, lam0, spec)
    return QuadResult(res.value / math.pi, res.err_estimate / math.pi, res.evals, res.converged, res.meta)


# ---------------------------------------------------------------- contour steps

CONTOUR_SAMPLES = (
    (0.3 + 1.1j, -0.4 + 0.7j, 0.5),
    (1.2 + 0.4j, 0.1 + 2.0j, 1.3),
    (-0.7 + 0.9j, 0.6 + 0.3j, 0.2),
)


def contour_step_checks(samples=CONTOUR_SAMPLES, spec: QuadSpec | None = None):
    """x-line integrals of the two zero-mode kernels against their residue values."""
    spec = spec or QuadSpec(rel_tol=1e-11, abs_tol=1e-14)
    out = []
    for zeta, eta, y in samples:
        eb = eta.conjugate()

        def double(x):
            return 1 / ((zeta - x + 1j * y) ** 2 * (zeta - eb) ** 2 * (x + 1j * y - eb) ** 2)

        def triple(x):
            return 2j * y / ((zeta - x + 1j * y) ** 3 * (zeta - eb) * (x + 1j * y - eb) ** 3)

        center = 0.5 * (zeta.real + eta.real)
        scale = max(1.0, y + zeta.imag)
        closed = (-4j * math.pi / ((zeta - eb + 2j * y) ** 3 * (zeta - eb) ** 2),
                  24 * math.pi * y / ((zeta - eb + 2j * y) ** 5 * (zeta - eb)))
        for name, f, c in (("double_pole", double, closed[0]), ("triple_pole", triple, closed[1])):
            r = integrate_real_line(f, spec, center=center, scale=scale)
            out.append({"kind": name, "zeta": zeta, "eta": eta, "y": y, "numeric": r.value,
                        "closed": complex(c), "err": r.err_estimate})
    return out


# ---------------------------------------------------------------- weight one


def weight_one_vanishing_checks(c: CuspCoeffs, e: EllipticCoeffs, spec: QuadSpec | None = None):
    """The cusp and elliptic integrals that must vanish at n=1, computed as they stand."""
    spec = spec or QuadSpec(rel_tol=1e-10, abs_tol=1e-14)
    p = -math.pi / 12 * integrate_half_strip(lambda z: eval_cusp(c, z), 2 * math.pi, spec).value
    m = e.m
    if not e.chi:
        return p, 0j
    rsum = sum(_root(m, ell) / (_root(m, ell) - 1) ** 2 for ell in range(1, m))
    # the k=2 mode makes the integrand ~ 1/|z|^2 at the origin, so the integral
    # exists only with the angle done first. The angular factor is a finite
    # Fourier sum, which the uniform rule with more nodes than its top
    # frequency integrates exactly.
    nodes = 2 * max(e.chi) + 8
    theta = 2 * math.pi * np.arange(nodes) / nodes

    def radial(r):
        r = np.asarray(r, dtype=float)
        z = r[:, None] * np.exp(1j * theta)[None, :]
        zb = np.conj(z)
        s = sum((k ** 3 - k) * v * zb ** (k - 2) for k, v in e.items())
        ang = np.mean((1 - r[:, None] ** 2) ** 2 / z ** 2 * s, axis=1) * 2 * math.pi
        return ang * r

    q = -1 / (16 * math.pi * m) * rsum * integrate_1d(radial, 0.0, 1.0, spec).value
    return p, q
