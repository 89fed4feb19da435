"""Moebius maps of the upper half-plane, point-pair invariants and the Cayley map."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, NotHyperbolic, PoleAtPoint

# band around |trace| = 2 treated as parabolic
TRACE_TOL = 1e-9
DET_TOL = 1e-12


class ElementKind(Enum):
    IDENTITY = "identity"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"


@dataclass(frozen=True)
class PointUHP:
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not z.imag > 0:
            raise DomainError(f"point {z} is not in the upper half-plane")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class PointDisc:
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not abs(z) < 1:
            raise DomainError(f"point {z} is not in the unit disc")
        object.__setattr__(self, "z", z)


def _coord(z):
    if isinstance(z, (PointUHP, PointDisc)):
        return z.z
    return z


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """Element of PSL(2,R) as a unimodular real matrix [[a, b], [c, d]].

    Entries are rescaled to determinant one and the sign is fixed so that the
    first nonzero entry is positive.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = (float(v) for v in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if not det > 0:
            raise DomainError(f"matrix determinant {det} is not positive")
        if abs(det - 1.0) > DET_TOL:
            r = math.sqrt(det)
            a, b, c, d = a / r, b / r, c / r, d / r
        for v in (a, b, c, d):
            if v != 0:
                if v < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        # avoid negative zeros so equality and hashing are plain
        a, b, c, d = (v + 0.0 for v in (a, b, c, d))
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, v)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_json(cls, text):
        entries = json.loads(text) if isinstance(text, str) else text
        if len(entries) != 4:
            raise DomainError("a map needs exactly four entries [a, b, c, d]")
        return cls(*entries)

    def to_json(self):
        return json.dumps(self.entries())

    def entries(self):
        return [self.a, self.b, self.c, self.d]

    def key(self, decimals=9):
        """Rounded entries, used for deduplication."""
        return tuple(round(v, decimals) + 0.0 for v in self.entries())

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.key())

    def __matmul__(self, other):
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self):
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    @property
    def trace(self):
        return self.a + self.d

    @property
    def frobenius_norm(self):
        return math.sqrt(self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2)

    def __call__(self, z):
        return apply(self, z)

    def __repr__(self):
        return f"MoebiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


def apply(g: MoebiusMap, z):
    """Image (az+b)/(cz+d); keeps the point type of the argument."""
    zz = _coord(z)
    w = (g.a * zz + g.b) / (g.c * zz + g.d)
    if isinstance(z, PointUHP):
        return PointUHP(w)
    return w


def derivative(g: MoebiusMap, z):
    zz = _coord(z)
    den = g.c * zz + g.d
    if np.any(den == 0):
        raise PoleAtPoint(f"cz+d vanishes at z={zz}")
    return 1.0 / den ** 2


def classify(g: MoebiusMap, tol=TRACE_TOL) -> ElementKind:
    if abs(g.b) <= tol and abs(g.c) <= tol and abs(g.a - 1) <= tol and abs(g.d - 1) <= tol:
        return ElementKind.IDENTITY
    excess = abs(g.trace) - 2.0
    if excess > tol:
        return ElementKind.HYPERBOLIC
    if excess >= -tol:
        return ElementKind.PARABOLIC
    return ElementKind.ELLIPTIC


def multiplier_from_trace(trace):
    t = abs(trace)
    if not t > 2:
        raise NotHyperbolic(f"|trace| = {t} is not larger than 2")
    return ((t + math.sqrt(t * t - 4.0)) / 2.0) ** 2


def multiplier(g: MoebiusMap) -> float:
    """The number lam > 1 with sqrt(lam) + 1/sqrt(lam) = |trace|."""
    if classify(g) is not ElementKind.HYPERBOLIC:
        raise NotHyperbolic(f"{g!r} is not hyperbolic")
    return multiplier_from_trace(g.trace)


def point_pair_invariant(z, w):
    """|z-w|^2 / (4 Im z Im w) on the upper half-plane."""
    z, w = _coord(z), _coord(w)
    return np.abs(z - w) ** 2 / (4.0 * np.imag(z) * np.imag(w))


def disc_point_pair_invariant(z, w):
    """The same invariant written in disc coordinates."""
    z, w = _coord(z), _coord(w)
    return np.abs(z - w) ** 2 / ((1.0 - np.abs(z) ** 2) * (1.0 - np.abs(w) ** 2))


def cayley(z):
    """Disc to upper half-plane, 0 -> i."""
    zz = _coord(z)
    if np.any(zz == 1):
        raise PoleAtPoint("the Cayley map has a pole at z = 1")
    w = 1j * (1 + zz) / (1 - zz)
    if isinstance(z, PointDisc):
        return PointUHP(w)
    return w


def cayley_derivative(z):
    zz = _coord(z)
    if np.any(zz == 1):
        raise PoleAtPoint("the Cayley map has a pole at z = 1")
    return 2j / (1 - zz) ** 2


def cayley_inv(w):
    """Upper half-plane to disc, i -> 0."""
    ww = _coord(w)
    z = (ww - 1j) / (ww + 1j)
    if isinstance(w, PointUHP):
        return PointDisc(z)
    return z
