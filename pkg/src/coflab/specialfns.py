"""Gamma and Barnes G, low-degree Bernoulli polynomials and finite sums over roots of unity."""

from __future__ import annotations

import cmath
import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import DomainError, PoleAtNonpositiveInteger, UnsupportedDegree

LOG_2PI = math.log(2 * math.pi)
# below this argument Barnes G is reached by downward recursion
BARNES_ASYMPTOTIC_FROM = 10.0


class RootSumKind(Enum):
    FIRST_ORDER = 1
    SECOND_ORDER = 2


def gamma_ln(z) -> complex:
    """Principal branch of log Gamma (the analytic continuation, not log of Gamma)."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise PoleAtNonpositiveInteger(f"Gamma has a pole at {z.real:g}")
    if z == 1 or z == 2:
        return 0j
    return complex(special.loggamma(z))


@lru_cache(maxsize=None)
def _bernoulli_numbers(count):
    return tuple(float(b) for b in special.bernoulli(count))


def _barnes_asymptotic(z):
    # log G(1+y) for large y
    y = z - 1.0
    b = _bernoulli_numbers(2 * 12 + 2)
    tail = math.fsum(b[2 * k + 2] / (4 * k * (k + 1) * y ** (2 * k)) for k in range(1, 12))
    return (
        (y * y / 2 - 1 / 12) * math.log(y)
        - 0.75 * y * y
        + 0.5 * y * LOG_2PI
        + zeta_prime_minus_one()
        + tail
    )


def barnes_g_ln(z) -> float:
    """log G(z) for real z > 0, normalized by G(1) = 1."""
    z = float(z)
    if not z > 0:
        raise DomainError(f"barnes_g_ln needs z > 0, got {z}")
    if z == 1.0 or z == 2.0:
        return 0.0
    if z >= BARNES_ASYMPTOTIC_FROM:
        return _barnes_asymptotic(z)
    shift = math.ceil(BARNES_ASYMPTOTIC_FROM - z)
    logs = [special.gammaln(z + j) for j in range(shift)]
    return _barnes_asymptotic(z + shift) - math.fsum(logs)


def double_gamma_ln(z, convention="gz_2pi") -> float:
    """log of the double gamma function in one of two common normalizations.

    "gz_2pi": (2 pi)^((z-1)/2) / G(z);  "inverse_g": 1 / G(z).
    """
    if convention == "gz_2pi":
        return 0.5 * (z - 1) * LOG_2PI - barnes_g_ln(z)
    if convention == "inverse_g":
        return -barnes_g_ln(z)
    raise DomainError(f"unknown double gamma convention {convention!r}")


def least_positive_residue(m: int, k: int) -> int:
    if m < 2:
        raise DomainError("modulus must be at least 2")
    r = k % m
    return r if r else m


def bernoulli(deg, x):
    if deg == 1:
        return x - Fraction(1, 2) if isinstance(x, Fraction) else x - 0.5
    if deg == 2:
        if isinstance(x, Fraction):
            return x * x - x + Fraction(1, 6)
        return x * x - x + 1 / 6
    raise UnsupportedDegree(f"Bernoulli polynomial of degree {deg} not provided")


def _frac_part(q: Fraction) -> Fraction:
    return q - math.floor(q)


def _unit_root(j, m):
    # e^{2 pi i j/m}; fold to an angle in [0, pi/4] so cos/sin see a small argument
    j %= m
    quarter = 4 * j // m
    rem = 4 * j - quarter * m  # angle within the quarter is pi*rem/(2m)
    if 2 * rem <= m:
        t = math.pi * rem / (2 * m)
        c, s = math.cos(t), math.sin(t)
    else:
        t = math.pi * (m - rem) / (2 * m)
        c, s = math.sin(t), math.cos(t)
    for _ in range(quarter):
        c, s = -s, c
    return complex(c, s)


@lru_cache(maxsize=256)
def _roots(m):
    return np.array([_unit_root(j, m) for j in range(m)])


def _one_minus_root(m, ell):
    # 1 - e^{i t} = -2i sin(t/2) e^{i t/2}, free of cancellation for small t
    t = 2 * math.pi * ell / m
    return -2j * math.sin(t / 2) * cmath.exp(0.5j * t)


def _check_m(m):
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise DomainError(f"order m must be an integer >= 2, got {m!r}")


def root_of_unity_sum(kind: RootSumKind, m: int, n: int, direct=False):
    """Sum over l = 1..m-1 of w^(ln)/(1-w^l) or w^(ln)/(1-w^l)^2, w = e^(2 pi i/m).

    The closed form is returned as an exact Fraction; direct=True sums the terms.
    """
    _check_m(m)
    if direct:
        return _root_sum_direct(kind, m, n)
    frac = _frac_part(Fraction(n - 1, m))
    if kind is RootSumKind.FIRST_ORDER:
        return m * (bernoulli(1, frac) + Fraction(1, 2 * m))
    if kind is RootSumKind.SECOND_ORDER:
        return -Fraction(m * m, 2) * (bernoulli(2, frac) - Fraction(1, 6 * m * m))
    raise DomainError(f"unknown root sum kind {kind!r}")


def _root_sum_direct(kind, m, n):
    w = _roots(m)
    power = 1 if kind is RootSumKind.FIRST_ORDER else 2
    parts = []
    # l and m-l give conjugate terms
    for ell in range(1, m // 2 + 1):
        term = w[(ell * n) % m] / _one_minus_root(m, ell) ** power
        if 2 * ell == m:
            parts.append(term.real)
        else:
            parts.append(2 * term.real)
    return complex(math.fsum(parts), 0.0)


def finite_convolution_sum(kind: str, k: int, m: int, ell: int, direct=False) -> complex:
    """The two finite sums over s that appear when k is a multiple of m.

    "SK": sum_{s=1}^{k-1} s(k-s) w^{l(s-1)};  "SS": sum_{s=2}^{k} s(s-1) w^{l(k-s)}.
    """
    _check_m(m)
    if kind not in ("SK", "SS"):
        raise DomainError(f"unknown convolution kind {kind!r}")
    if k % m:
        raise DomainError(f"k={k} is not a multiple of m={m}")
    if not 1 <= ell <= m - 1:
        raise DomainError("ell must lie in 1..m-1")
    w = _roots(m)
    if direct:
        if kind == "SK":
            pairs = [(s * (k - s), (ell * (s - 1)) % m) for s in range(1, k)]
        else:
            pairs = [(s * (s - 1), (ell * (k - s)) % m) for s in range(2, k + 1)]
        # collect exact integer weights per root, then remove their mean over the
        # cyclic subgroup actually hit; its roots sum to zero, so the value is
        # unchanged while the rounding of each root is multiplied by much less
        coeff = {}
        for c, e in pairs:
            coeff[e] = coeff.get(e, 0) + c
        step = math.gcd(ell, m)
        used = range(0, m, step)
        mean = Fraction(sum(coeff.get(e, 0) for e in used), len(used))
        centered = [(float(coeff.get(e, 0) - mean), e) for e in used]
        re = math.fsum(c * w[e].real for c, e in centered)
        im = math.fsum(c * w[e].imag for c, e in centered)
        return complex(re, im)
    wl = w[ell % m]
    den = _one_minus_root(m, ell) ** 2
    if kind == "SK":
        return complex(2 * k / den)
    return complex((k * (k - 1) - k * (k + 1) * wl) / den)


def elliptic_constant(m: int, n: int) -> Fraction:
    """Exact rational constant attached to an order-m elliptic point at weight n."""
    _check_m(m)
    if n < 1:
        raise DomainError("weight n must be >= 1")
    frac = _frac_part(Fraction(n - 1, m))
    return Fraction(m, 4) * (bernoulli(2, frac) - Fraction(1, 6 * m * m)) - Fraction(n - 1, 2) * (
        bernoulli(1, frac) + Fraction(1, 2 * m)
    )


def elliptic_constant_from_root_sums(m: int, n: int) -> float:
    """Same constant, assembled from the directly summed root-of-unity sums."""
    _check_m(m)
    if n < 1:
        raise DomainError("weight n must be >= 1")
    s2 = root_of_unity_sum(RootSumKind.SECOND_ORDER, m, n, direct=True).real
    s1 = root_of_unity_sum(RootSumKind.FIRST_ORDER, m, n, direct=True).real
    return -(s2 + (n - 1) * s1) / (2 * m)


@lru_cache(maxsize=1)
def glaisher_ln() -> float:
    """log of the Glaisher-Kinkelin constant by Euler-Maclaurin at a cutoff of 10."""
    N = 10
    b = _bernoulli_numbers(40)
    # sum k = N(N+1)/2 exactly, so the (N^2/2 + N/2) log N term folds into the
    # logs and never has to be cancelled in floating point
    head = math.fsum(k * math.log(k / N) for k in range(1, N))
    corr = math.fsum(
        b[2 * j] / ((2 * j) * (2 * j - 1) * (2 * j - 2) * N ** (2 * j - 2)) for j in range(2, 16)
    )
    return math.fsum([head, -math.log(N) / 12, N * N / 4, corr])


def zeta_prime_minus_one() -> float:
    return 1 / 12 - glaisher_ln()
