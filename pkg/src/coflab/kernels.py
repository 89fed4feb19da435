"""Reproducing, Green's and resolvent kernels, in half-plane and disc coordinates.

Half-plane kernels take complex points with positive imaginary part, disc
kernels points of modulus below one.  Everything here is a closed form or a
series with an explicit error bound; quadrature appears only in the
`*_quadrature` cross-checks and in the variation of the reproducing kernel.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import CoincidentPoints, DivergentParameterRegion, DomainError, TailBoundExceedsTolerance
from .hyperbolic_core import (
    _coord,
    cayley,
    cayley_inv,
    disc_point_pair_invariant,
    point_pair_invariant,
)
from .quad import QuadSpec, integrate_disc
from .specialfns import gamma_ln

FOUR_PI = 4 * math.pi
# below this u the resolvent series is refused for Re s <= 1/2
PSI_MIN_U_SMALL_S = 0.05
# Green's kernel switches to its 1/u expansion beyond this point
GREEN_SERIES_FROM = 20.0
# Poincare sums group elements in norm shells growing by this factor
SHELL_RATIO = math.sqrt(2)


@dataclass(frozen=True)
class KernelParams:
    n: int
    s: complex = 2.0
    k_max: int = 100_000
    abs_tol: float = 1e-14

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise DomainError(f"weight n must be a nonnegative integer, got {self.n!r}")
        if self.k_max < 1:
            raise DomainError("k_max must be at least 1")
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")


@dataclass
class SeriesValue:
    value: complex
    err: float
    terms: int


# ---------------------------------------------------------------- projection kernel


def projection_kernel(n: int, z, w) -> complex:
    """Reproducing kernel of weight-2n cusp forms on the upper half-plane."""
    if n < 1:
        raise DomainError("projection kernel needs n >= 1")
    z, w = _coord(z), _coord(w)
    return (-1) ** n * 4.0 ** (n - 1) * (2 * n - 1) / math.pi / (z - np.conj(w)) ** (2 * n)


def projection_kernel_disc(n: int, zeta, eta) -> complex:
    """The same kernel carried to the disc by the Cayley map (both slots)."""
    if n < 1:
        raise DomainError("projection kernel needs n >= 1")
    zeta, eta = _coord(zeta), _coord(eta)
    return 4.0 ** (n - 1) * (2 * n - 1) / math.pi / (1 - zeta * np.conj(eta)) ** (2 * n)


# ---------------------------------------------------------------- Green's kernel


def _green_from_u(u):
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("the point-pair invariant is nonnegative")
    if np.any(u == 0):
        raise CoincidentPoints("Green's kernel is singular on the diagonal")
    out = np.empty(u.shape)
    near = u <= GREEN_SERIES_FROM
    un = u[near]
    out[near] = (2 * un + 1) / (2 * math.pi) * np.log1p(1 / un) - 1 / math.pi
    far = ~near
    if far.any():
        x = 1 / u[far]
        acc = np.zeros_like(x)
        for j in range(31, 1, -1):
            acc = acc * x + (-1) ** j * (j - 1) / (j * (j + 1))
        out[far] = acc * x * x / (2 * math.pi)
    return out


def green_kernel(u):
    """Resolvent of the Laplacian at s = 2 as a function of the point-pair invariant."""
    out = _green_from_u(u)
    return float(out) if out.ndim == 0 else out


def green_kernel_disc(z, w):
    return green_kernel(disc_point_pair_invariant(z, w))


# ---------------------------------------------------------------- resolvent series


def _psi_complex(n, s, u, deriv, abs_tol, k_max):
    # scalar series for complex s; same stopping rule as the compiled one, on moduli
    q = 1 / (u + 1)
    k0 = _backend.start_index(n, abs(s))
    rising = 1.0
    for j in range(deriv):
        rising *= s + j
    t = cmath.exp(gamma_ln(s) + gamma_ln(s + 2 * n) - gamma_ln(2 * s + 2 * n) - (s + deriv) * math.log1p(u)) * rising
    total, mass, bound = 0j, 0.0, math.inf
    for k in range(k_max):
        total += t
        mass += abs(t)
        rho = (s + 2 * n + k) * (s + k + deriv) / ((k + 1) * (2 * s + 2 * n + k)) * q
        if k >= k0 and abs(rho) < 1:
            r = max(abs(rho), q)
            bound = abs(t) * r / (1 - r)
            if bound < abs_tol:
                return (-1) ** deriv * total, bound + 2.3e-16 * (k + 1) * mass, k + 1, True
        t *= rho
    return (-1) ** deriv * total, bound, k_max, False


def _psi_checks(params, u):
    s = complex(params.s)
    if s.real < 0 or (s.real == 0 and s.imag != 0):
        raise DomainError("the resolvent series needs Re s > 0")
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("u must be nonnegative")
    if s != 0:
        if np.any(u == 0):
            raise TailBoundExceedsTolerance("the resolvent series diverges on the diagonal u = 0")
        if s.real <= 0.5 and np.any(u < PSI_MIN_U_SMALL_S):
            raise TailBoundExceedsTolerance(
                f"u < {PSI_MIN_U_SMALL_S} with Re s <= 1/2 converges too slowly to certify")
    return s, u


def resolvent_profile_array(params: KernelParams, u, deriv=0):
    """Values, error bounds and term counts of (d/du)^deriv Psi_{n,s}(u) on an array."""
    if deriv not in (0, 1, 2):
        raise DomainError("deriv must be 0, 1 or 2")
    s, u = _psi_checks(params, u)
    if s == 0:
        if np.any(u == 0):
            raise CoincidentPoints("the s = 0 profile is singular at u = 0")
        val = [np.log(1 / u), -1 / u, 1 / u ** 2][deriv] / FOUR_PI
        return val, np.full(u.shape, 2.3e-16) * np.abs(val), np.ones(u.shape, dtype=np.int64)
    n = int(params.n)
    if s.imag == 0:
        sr = s.real
        log_c0 = math.lgamma(sr) + math.lgamma(sr + 2 * n) - math.lgamma(2 * sr + 2 * n)
        tol = params.abs_tol * FOUR_PI
        val, err, used, ok = _backend.psi_series(u, n, sr, deriv, log_c0, tol, params.k_max)
    else:
        flat = [_psi_complex(n, s, float(x), deriv, params.abs_tol * FOUR_PI, params.k_max) for x in u.ravel()]
        val = np.array([f[0] for f in flat]).reshape(u.shape)
        err = np.array([f[1] for f in flat]).reshape(u.shape)
        used = np.array([f[2] for f in flat]).reshape(u.shape)
        ok = np.array([f[3] for f in flat]).reshape(u.shape)
    if not np.all(ok):
        raise TailBoundExceedsTolerance(f"tail bound not below {params.abs_tol:g} within {params.k_max} terms")
    return val / FOUR_PI, err / FOUR_PI, used


def resolvent_profile(params: KernelParams, u, deriv=0) -> SeriesValue:
    """Psi_{n,s}(u), the radial profile of the weight-n resolvent kernel at spectral parameter s."""
    val, err, used = resolvent_profile_array(params, np.array([float(u)]), deriv)
    v = val[0]
    v = complex(v) if np.iscomplexobj(val) else float(v)
    return SeriesValue(v, float(err[0]), int(used[0]))


def _weight_factor(n, z, w):
    return (-4.0) ** n / (z - np.conj(w)) ** (2 * n)


def resolvent_kernel(params: KernelParams, z, w) -> SeriesValue:
    """Resolvent kernel on the upper half-plane: profile times (-4)^n/(z - conj w)^{2n}."""
    z, w = _coord(z), _coord(w)
    prof = resolvent_profile(params, point_pair_invariant(z, w))
    h = _weight_factor(params.n, z, w)
    return SeriesValue(prof.value * h, prof.err * abs(h), prof.terms)


def resolvent_derivative_identity(n: int, z, w, abs_tol=1e-15):
    """Both sides of the w-derivative identity linking the s = 1 resolvent to the projection kernel.

    lhs is the closed form; rhs differentiates the weight n-1 resolvent series
    term by term.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    z, w = complex(_coord(z)), complex(_coord(w))
    if z == w:
        raise CoincidentPoints("the identity is singular at z = w")
    zb, wb = z.conjugate(), w.conjugate()
    h = (-4.0) ** (n - 1) / (z - wb) ** (2 * n - 2)
    lhs = -h / (FOUR_PI * (z - w) ** 2)
    params = KernelParams(n - 1, 1.0, abs_tol=abs_tol)
    u = float(point_pair_invariant(z, w))
    d1 = resolvent_profile(params, u, 1).value
    d2 = resolvent_profile(params, u, 2).value
    du_z = -(zb - wb) * (w - zb) / ((z - zb) ** 2 * (w - wb))
    du_w = (zb - wb) * (z - wb) / ((z - zb) * (w - wb) ** 2)
    du_wz = -(zb - wb) ** 2 / ((z - zb) ** 2 * (w - wb) ** 2)
    m = 2 * n - 2
    rhs = h * (d2 * du_w * du_z + d1 * du_wz - m * d1 * du_w / (z - wb) + m * d1 * du_w / (z - zb))
    return complex(lhs), complex(rhs)


# ---------------------------------------------------------------- three-point kernels


def xi_kernel(zeta, z, w) -> complex:
    """Regular three-point kernel on the upper half-plane; vanishes when z = w."""
    zeta, z, w = _coord(zeta), _coord(z), _coord(w)
    zb, wb = np.conj(z), np.conj(w)
    d2 = (wb - zb) ** 2
    return (d2 / ((zeta - zb) ** 2 * (zeta - wb) ** 2 * (z - wb) ** 2)
            + 2 * d2 * (z - zb) / ((zeta - zb) ** 3 * (zeta - wb) * (z - wb) ** 3))


def xi_kernel_disc(zeta, z, w) -> complex:
    zeta, z, w = _coord(zeta), _coord(z), _coord(w)
    zb, wb = np.conj(z), np.conj(w)
    d2 = (wb - zb) ** 2
    return (-d2 / ((1 - zeta * zb) ** 2 * (1 - zeta * wb) ** 2 * (1 - z * wb) ** 2)
            - 2 * d2 * (1 - abs(z) ** 2) / ((1 - zeta * zb) ** 3 * (1 - zeta * wb) * (1 - z * wb) ** 3))


def xi_kernel_disc_quadrature(zeta, z, w, spec: QuadSpec | None = None):
    """The disc three-point kernel as a principal-value area integral; returns a QuadResult."""
    zeta, z, w = complex(_coord(zeta)), complex(_coord(z)), complex(_coord(w))
    spec = spec or QuadSpec(rel_tol=1e-9, abs_tol=1e-10)
    wb = w.conjugate()

    def f(u, d):
        return (1 - np.abs(u) ** 2) ** 2 / (d ** 2 * (1 - u * wb) ** 2 * (1 - zeta * np.conj(u)) ** 4)

    res = integrate_disc(f, spec, hint=z, local=True)
    res.value *= -3 / math.pi
    res.err_estimate *= 3 / math.pi
    return res


def lambda_kernel(z, zeta, eta) -> complex:
    """Disc kernel obtained by applying twice the inverse of (Laplacian + 2) to projection kernels."""
    z, zeta, eta = _coord(z), _coord(zeta), _coord(eta)
    zb, eb = np.conj(z), np.conj(eta)
    a = 1 - abs(z) ** 2
    return (2 * a ** 2 / ((1 - zeta * zb) ** 2 * (1 - zeta * eb) ** 2 * (1 - z * eb) ** 2)
            + 2 * a ** 3 / ((1 - zeta * zb) ** 3 * (1 - zeta * eb) * (1 - z * eb) ** 3))


def lambda_kernel_partial_sum(zeta, eta, terms: int) -> complex:
    """Partial sums 2 sum_{k=2}^{terms+1} k x^(k-2), x = zeta conj(eta), of lambda_kernel(0, zeta, eta)."""
    x = complex(_coord(zeta)) * complex(_coord(eta)).conjugate()
    return 2 * sum((k + 2) * x ** k for k in range(terms))


def lambda_kernel_quadrature(zeta, eta, spec: QuadSpec | None = None):
    """lambda_kernel(0, zeta, eta) from the Green's kernel at the origin; returns a QuadResult."""
    zeta, eta = complex(_coord(zeta)), complex(_coord(eta))
    spec = spec or QuadSpec(rel_tol=1e-8, abs_tol=1e-10)
    eb = eta.conjugate()

    def f(w):
        r2 = np.abs(w) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            g = ((1 + r2) / (2 * (1 - r2)) * np.log(1 / r2) - 1) / math.pi
        return 36 * g * (1 - r2) ** 2 / ((1 - zeta * np.conj(w)) ** 4 * (1 - w * eb) ** 4)

    return integrate_disc(f, spec, hint=0j)


def green_origin_normalization(spec: QuadSpec | None = None):
    """Integral of the disc Green's kernel at the origin against the hyperbolic area form."""
    spec = spec or QuadSpec(rel_tol=1e-8, abs_tol=1e-10)

    def f(w):
        r2 = np.abs(w) ** 2
        g = ((1 + r2) / (2 * (1 - r2)) * np.log(1 / r2) - 1) / math.pi
        return g * 4 / (1 - r2) ** 2

    return integrate_disc(f, spec, hint=0j)


@dataclass
class BergmanCheck:
    projected: complex
    direct: complex
    err: float


def bergman_reproduce(phi, z, spec: QuadSpec | None = None) -> BergmanCheck:
    """Project a holomorphic disc function with the weight-4 Bergman kernel and compare with phi(z)."""
    z = complex(_coord(z))
    spec = spec or QuadSpec(rel_tol=1e-10, abs_tol=1e-12)
    zb = z

    def f(w):
        return (1 - np.abs(w) ** 2) ** 2 * phi(w) / (1 - zb * np.conj(w)) ** 4

    res = integrate_disc(f, spec)
    return BergmanCheck(complex(3 / math.pi * res.value), complex(phi(z)), 3 / math.pi * res.err_estimate)


# ---------------------------------------------------------------- variation of the projection kernel


def _over_half_plane(g, spec, hint=None):
    # int_U g(zeta) d^2 zeta, pulled back to the disc by the Cayley map
    if hint is None:
        def f(eta):
            return g(cayley(eta), None) * np.abs(2 / (1 - eta) ** 2) ** 2
        return integrate_disc(f, spec)

    p = complex(hint)

    def f(eta, d):
        return g(cayley(eta), d) * np.abs(2 / (1 - eta) ** 2) ** 2

    return integrate_disc(f, spec, hint=p, local=True)


def projection_variation(mu, n: int, z, w, spec: QuadSpec | None = None, route="regularized"):
    """First variation of (z - conj w)^{-2n} along a harmonic Beltrami differential mu.

    mu is a vectorized function on the upper half-plane.  The regularized
    route integrates a kernel with no singularity in the half-plane; the
    "singular" route is the principal-value integral it replaces, kept as a
    cross-check.  Returns a QuadResult.
    """
    z, w = complex(_coord(z)), complex(_coord(w))
    spec = spec or QuadSpec(rel_tol=1e-10, abs_tol=1e-13)
    zb, wb = z.conjugate(), w.conjugate()
    if route == "regularized":
        pref = -n / math.pi / (z - wb) ** (2 * n)

        def g(zeta, _):
            d2 = (zb - wb) ** 2
            return mu(zeta) * (d2 / ((zeta - zb) ** 2 * (zeta - wb) ** 2)
                               + 2 * d2 * (z - zb) / ((zeta - zb) ** 3 * (zeta - wb) * (z - wb)))

        res = _over_half_plane(g, spec)
    elif route == "singular":
        pref = -n / math.pi / (z - wb) ** (2 * n - 2)
        p = complex(cayley_inv(z))

        def g(zeta, d):
            # 1/(zeta - z)^2 with the disc offset d = eta - p carried exactly
            eta = p + d
            inv_sq = -((1 - eta) * (1 - p)) ** 2 / (4 * d ** 2)
            return mu(zeta) * inv_sq / (zeta - wb) ** 2

        res = _over_half_plane(g, spec, hint=p)
    else:
        raise DomainError(f"unknown route {route!r}")
    res.value = complex(pref * res.value)
    res.err_estimate *= abs(pref)
    return res


def projection_variation_dbar(mu, n: int, z, w) -> complex:
    """Closed form of the z-bar derivative of projection_variation."""
    z, w = complex(_coord(z)), complex(_coord(w))
    zb, wb = z.conjugate(), w.conjugate()
    return complex(-2 * n * mu(np.array([z]))[0] * (wb - zb) / ((z - wb) * (z - zb)) / (z - wb) ** (2 * n))


# ---------------------------------------------------------------- Poincare series


@dataclass
class PoincareSum:
    value: complex
    tail_estimate: float
    shells: list = field(default_factory=list)
    terms: int = 0
    series_err: float = 0.0


def poincare_sum(elements, params: KernelParams, z, w, norm_bound=None, shell_ratio=SHELL_RATIO) -> PoincareSum:
    """Sum of the resolvent kernel over group elements, grouped in Frobenius-norm shells.

    Shell j holds the elements with sqrt(2) r^j <= norm < sqrt(2) r^(j+1),
    r = shell_ratio; geometric shells make the shell sums decay roughly
    geometrically.  With norm_bound, the elements past the last complete shell
    are dropped.  The tail estimate extrapolates the last shell with the mean
    ratio of the last three shells; it is a heuristic, not a bound.
    """
    if not complex(params.s).real > 1:
        raise DivergentParameterRegion("the Poincare series needs Re s > 1")
    if not shell_ratio > 1:
        raise DomainError("shell_ratio must exceed 1")
    z, w = complex(_coord(z)), complex(_coord(w))
    els = list(elements)
    if not els:
        raise DomainError("no group elements given")
    a, b, c, d = np.array([g.entries() for g in els]).T
    norms = np.sqrt(a * a + b * b + c * c + d * d)
    shell_id = np.floor(np.log(norms / math.sqrt(2)) / math.log(shell_ratio) + 1e-9).astype(int)
    shell_id = np.maximum(shell_id, 0)
    if norm_bound is not None:
        complete = int(math.floor(math.log(norm_bound / math.sqrt(2)) / math.log(shell_ratio) + 1e-9))
        keep = shell_id < complete
        if not keep.any():
            raise DomainError("norm_bound leaves no complete shell")
        a, b, c, d, shell_id = a[keep], b[keep], c[keep], d[keep], shell_id[keep]
    gz = (a * z + b) / (c * z + d)
    jac = 1 / (c * z + d) ** 2
    u = point_pair_invariant(gz, w)
    if np.any(u == 0):
        raise CoincidentPoints("an image of z coincides with w")
    val, err, _ = resolvent_profile_array(params, u)
    h = _weight_factor(params.n, gz, w) * jac ** params.n
    terms = val * h
    shells = [complex(terms[shell_id == j].sum()) for j in range(int(shell_id.max()) + 1)]
    tail = math.inf
    if len(els) == 1:
        tail = 0.0
    elif len(shells) >= 4:
        mags = [abs(v) for v in shells[-4:]]
        if all(m > 0 for m in mags):
            q = (mags[3] / mags[0]) ** (1 / 3)
            if q < 1:
                tail = mags[-1] * q / (1 - q)
    return PoincareSum(complex(terms.sum()), tail, shells, int(terms.size), float(np.sum(err * np.abs(h))))


__all__ = [
    "KernelParams",
    "SeriesValue",
    "BergmanCheck",
    "PoincareSum",
    "projection_kernel",
    "projection_kernel_disc",
    "green_kernel",
    "green_kernel_disc",
    "resolvent_profile",
    "resolvent_profile_array",
    "resolvent_kernel",
    "resolvent_derivative_identity",
    "xi_kernel",
    "xi_kernel_disc",
    "xi_kernel_disc_quadrature",
    "lambda_kernel",
    "lambda_kernel_partial_sum",
    "lambda_kernel_quadrature",
    "green_origin_normalization",
    "bergman_reproduce",
    "projection_variation",
    "projection_variation_dbar",
    "poincare_sum",
]
