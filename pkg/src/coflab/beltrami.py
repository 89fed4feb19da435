"""Harmonic Beltrami differentials near a cusp and near an elliptic fixed point.

Both kinds are stored by finitely many Fourier coefficients, so every sum here
is exact and finite. Cusp data lives on the upper half-plane with the cusp at
infinity; elliptic data lives on the unit disc with the fixed point at 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError
from .quad import QuadResult, QuadSpec, integrate_half_strip

TZ_CUSP_SCALE = 3 / (128 * math.pi ** 5)


def _pair(v):
    v = complex(v)
    return [v.real, v.imag]


def _unpair(p):
    if isinstance(p, (list, tuple)):
        if len(p) != 2:
            raise DomainError(f"expected [re, im], got {p!r}")
        return complex(p[0], p[1])
    return complex(p)


@dataclass(frozen=True)
class CuspCoeffs:
    """Coefficients beta_1..beta_K of y^2 sum_k beta_k exp(-2 pi i k conj(z))."""

    beta: tuple

    def __init__(self, beta):
        beta = tuple(complex(b) for b in beta)
        if not beta:
            raise DomainError("cusp data needs at least one coefficient")
        object.__setattr__(self, "beta", beta)

    @property
    def support(self):
        return len(self.beta)

    def items(self):
        return enumerate(self.beta, 1)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        if "beta" not in data:
            raise DomainError("cusp coefficient file needs a 'beta' list")
        return cls([_unpair(p) for p in data["beta"]])

    def to_json(self):
        return json.dumps({"beta": [_pair(b) for b in self.beta]})


@dataclass(frozen=True)
class EllipticCoeffs:
    """Order m of the fixed point and chi_k, supported on positive multiples of m."""

    m: int
    chi: dict

    def __init__(self, m, chi):
        if int(m) != m or m < 2:
            raise DomainError(f"elliptic order must be an integer >= 2, got {m!r}")
        m = int(m)
        clean = {}
        for k, v in dict(chi).items():
            if int(k) != k or k < 2 or k % m:
                raise DomainError(f"index {k} is not a positive multiple of the order {m}")
            clean[int(k)] = complex(v)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "chi", dict(sorted(clean.items())))

    def __hash__(self):
        return hash((self.m, tuple(self.chi.items())))

    def with_coefficient(self, k, value):
        chi = dict(self.chi)
        chi[k] = value
        return EllipticCoeffs(self.m, chi)

    def items(self):
        return self.chi.items()

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        if "m" not in data:
            raise DomainError("elliptic coefficient file needs the order 'm'")
        chi = {}
        for key, p in data.get("chi", {}).items():
            try:
                k = int(key)
            except ValueError:
                raise DomainError(f"bad index {key!r}") from None
            chi[k] = _unpair(p)
        return cls(data["m"], chi)

    def to_json(self):
        return json.dumps({"m": self.m, "chi": {str(k): _pair(v) for k, v in self.chi.items()}})


def eval_cusp(c: CuspCoeffs, z):
    """Pointwise value at z in the upper half-plane. Accepts arrays."""
    z = np.asarray(z, dtype=complex)
    q = np.exp(-2j * np.pi * np.conj(z))
    total = np.zeros_like(z)
    qk = np.ones_like(z)
    for b in c.beta:
        qk = qk * q
        total = total + b * qk
    out = z.imag ** 2 * total
    return complex(out) if out.ndim == 0 else out


def eval_elliptic(e: EllipticCoeffs, z):
    """Pointwise value at z in the unit disc. Accepts arrays."""
    z = np.asarray(z, dtype=complex)
    zb = np.conj(z)
    total = np.zeros_like(z)
    for k, chi in e.items():
        total = total + (k ** 3 - k) * chi * zb ** (k - 2)
    out = (1 - (z * zb).real) ** 2 / 4 * total
    return complex(out) if out.ndim == 0 else out


def tz_cusp_pairing(a: CuspCoeffs, b: CuspCoeffs) -> complex:
    """Cusp pairing, linear in the first slot and conjugate-linear in the second."""
    s = sum(x * y.conjugate() / k ** 5 for k, (x, y) in enumerate(zip(a.beta, b.beta), 1))
    return TZ_CUSP_SCALE * complex(s)


def tz_cusp_norm(c: CuspCoeffs) -> float:
    return TZ_CUSP_SCALE * math.fsum(abs(b) ** 2 / k ** 5 for k, b in c.items())


def tz_cusp_norm_quadrature(c: CuspCoeffs, spec: QuadSpec | None = None) -> QuadResult:
    """Same norm as a direct area integral of |mu|^2 over 0 <= x <= 1, y > 0."""
    spec = spec or QuadSpec(rel_tol=1e-11, abs_tol=1e-16)
    return integrate_half_strip(lambda z: np.abs(eval_cusp(c, z)) ** 2, 4 * math.pi, spec)


def _check_same_order(a, b):
    if a.m != b.m:
        raise DomainError(f"orders differ: {a.m} and {b.m}")


def tz_elliptic_pairing(a: EllipticCoeffs, b: EllipticCoeffs) -> complex:
    _check_same_order(a, b)
    return complex(sum(k * v * b.chi[k].conjugate() for k, v in a.items() if k in b.chi))


def tz_elliptic_norm(e: EllipticCoeffs) -> float:
    return math.fsum(k * abs(v) ** 2 for k, v in e.items())


def cusp_zero_mode(c: CuspCoeffs, y):
    """The two parts (alpha, beta) of the zeroth Fourier mode at height y.

    alpha is the 1/y piece fixed by the norm, beta the exponentially small rest.
    """
    if not y > 0:
        raise DomainError(f"height must be positive, got {y!r}")
    alpha = 2 / (3 * y) * tz_cusp_norm(c)
    parts = []
    for k, b in c.items():
        t = 4 * math.pi * k * y
        # 1 + t + t^2/2 + t^3/8
        poly = 1 + t * (1 + t * (0.5 + t / 8))
        parts.append(abs(b) ** 2 / k ** 5 * poly * math.exp(-t))
    beta = -math.fsum(parts) / (64 * math.pi ** 5 * y)
    return alpha, beta


def cusp_zero_mode_exponential(c: CuspCoeffs, y):
    """The exponentially small part beta of the zero mode, vectorized over y > 0."""
    y = np.asarray(y, dtype=float)
    total = np.zeros_like(y)
    for k, b in c.items():
        t = 4 * math.pi * k * y
        total += abs(b) ** 2 / k ** 5 * (1 + t * (1 + t * (0.5 + t / 8))) * np.exp(-t)
    return -total / (64 * math.pi ** 5 * y)


def square_sum_profile(k, r):
    """sum_{s=1}^{k-1} s^2 r^(s-1)."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    for s in range(k - 1, 0, -1):
        out = out * r + s * s
    return out


def cubic_profile(k, r):
    """(1-r)^3 times square_sum_profile(k, r), written out in closed form."""
    r = np.asarray(r, dtype=float)
    return ((2 * k * k - 2 * k - 1) * r ** k - k * k * r ** (k - 1)
            - (k - 1) ** 2 * r ** (k + 1) + r + 1)


def cubic_profile_deriv(k, r):
    r = np.asarray(r, dtype=float)
    return ((2 * k * k - 2 * k - 1) * k * r ** (k - 1) - k * k * (k - 1) * r ** (k - 2)
            - (k - 1) ** 2 * (k + 1) * r ** k + 1)


def elliptic_zero_mode_poly(e: EllipticCoeffs) -> Polynomial:
    """The zeroth angular mode as an exact polynomial in r."""
    inner = Polynomial([0.0])
    for k, chi in e.items():
        w = k * abs(chi) ** 2
        coef = np.zeros(2 * k - 1)
        for s in range(1, k):
            coef[2 * s - 2] += s * s
        coef[2 * k - 2] -= k * (k - 1) ** 2 / 4
        inner = inner + w * Polynomial(coef)
    return Polynomial([0.5, 0, -1.0, 0, 0.5]) * inner


def elliptic_zero_mode(e: EllipticCoeffs, r) -> float:
    if not 0 <= r < 1:
        raise DomainError(f"radius must lie in [0, 1), got {r!r}")
    return float(elliptic_zero_mode_poly(e)(r))
