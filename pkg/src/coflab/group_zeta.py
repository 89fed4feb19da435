"""Signatures, element enumeration, primitive hyperbolic classes, Selberg zeta and the determinant constant."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BudgetExceeded,
    DivergentParameterRegion,
    DomainError,
    MissingA,
    NotHyperbolic,
    UnsupportedN1,
)
from .hyperbolic_core import ElementKind, MoebiusMap, classify, multiplier_from_trace
from .specialfns import double_gamma_ln, gamma_ln, least_positive_residue, zeta_prime_minus_one

# Selberg factors are summed until log1p terms drop below this
SELBERG_TERM_FLOOR = 1e-16
ROUND_DECIMALS = 9


@dataclass(frozen=True)
class Signature:
    g: int
    q: int
    orders: tuple = ()

    def __post_init__(self):
        orders = tuple(sorted(int(m) for m in self.orders))
        if self.g < 0 or self.q < 0:
            raise DomainError("genus and cusp count must be nonnegative")
        if any(m < 2 for m in orders):
            raise DomainError("elliptic orders must be at least 2")
        object.__setattr__(self, "orders", orders)
        if not self.euler_excess() > 0:
            raise NotHyperbolic(f"signature {self} is not hyperbolic")

    def euler_excess(self):
        return 2 * self.g - 2 + self.q + sum(1 - 1 / m for m in self.orders)


def hyperbolic_area(sig: Signature) -> float:
    return 2 * math.pi * sig.euler_excess()


def cusp_form_dimension(sig: Signature, n: int) -> int:
    """Dimension of the cusp forms of weight 2n for a group of this signature."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n == 0:
        return 1
    if n == 1:
        return sig.g
    # floor(n(1 - 1/m)) via integers
    ell = sum((n * (m - 1)) // m for m in sig.orders)
    return (2 * n - 1) * (sig.g - 1) + (n - 1) * sig.q + ell


# ---------------------------------------------------------------- groups


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    labels: tuple
    name: str = "group"

    def __post_init__(self):
        gens = tuple(g if isinstance(g, MoebiusMap) else MoebiusMap(*g) for g in self.generators)
        for g in gens:
            if abs(g.a * g.d - g.b * g.c - 1) > 1e-12:
                raise DomainError("generators must be unimodular")
        object.__setattr__(self, "generators", gens)
        if len(self.labels) != len(gens):
            raise DomainError("one label per generator")

    @classmethod
    def modular(cls):
        return cls((MoebiusMap(0, -1, 1, 0), MoebiusMap(1, 1, 0, 1)), ("S", "T"), "modular")

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        gens = []
        for entry in data["generators"]:
            if len(entry) != 4:
                raise DomainError("each generator needs four entries")
            a, b, c, d = (float(v) for v in entry)
            if abs(a * d - b * c - 1) > 1e-9:
                raise DomainError(f"generator {entry} does not have determinant 1")
            gens.append(MoebiusMap(a, b, c, d))
        labels = tuple(data.get("labels") or [f"g{i}" for i in range(len(gens))])
        name = data.get("name", "group")
        if name == "modular":
            # the built-in shortcut is reserved for the standard generators
            base = cls.modular()
            if set(gens) != set(base.generators):
                name = "modular-like"
        return cls(tuple(gens), labels, name)

    @property
    def is_modular(self):
        return self.name == "modular" and set(self.generators) == set(GroupPresentation.modular().generators)


@dataclass
class ElementSet:
    elements: list
    norm_bound: float
    complete: bool
    words: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in set(self.elements)


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def _modular_lattice(bound):
    # every (c, d) coprime row, then the a, b solutions along (a0 + t c, b0 + t d)
    r2 = bound * bound + 1e-9
    R = int(math.floor(bound))
    rows = []
    for c in range(0, R + 1):
        for d in range(-R, R + 1):
            if c * c + d * d > r2 or math.gcd(c, d) != 1:
                continue
            if c == 0 and d != 1:
                continue  # sign normalization: c = 0 forces d = a = 1
            if c == 0:
                for b in range(-R, R + 1):
                    rows.append((1, b, 0, 1))
                continue
            g, x, y = _egcd(d, -c)
            a0, b0 = x * g, y * g
            n2 = c * c + d * d
            t0 = -(a0 * c + b0 * d) / n2
            span = int(math.ceil(bound / math.sqrt(n2))) + 2
            for t in range(int(math.floor(t0)) - span, int(math.ceil(t0)) + span + 1):
                rows.append((a0 + t * c, b0 + t * d, c, d))
    arr = np.array(rows, dtype=float)
    arr = arr[(arr ** 2).sum(axis=1) <= r2]
    out = {}
    for row in arr:
        g = MoebiusMap(*row)
        out[g.key()] = g
    return list(out.values())


def _bfs(group, bound, max_elements, window):
    gens = list(group.generators) + [g.inverse() for g in group.generators]
    names = list(group.labels) + [lab + "^-1" for lab in group.labels]
    start = MoebiusMap.identity()
    seen = {start.key(): (start, "")}
    frontier = deque([start.key()])
    limit = bound * window
    while frontier:
        k = frontier.popleft()
        g, word = seen[k]
        for h, name in zip(gens, names):
            x = g @ h
            kx = x.key()
            if kx in seen or x.frobenius_norm > limit + 1e-9:
                continue
            seen[kx] = (x, word + (" " if word else "") + name)
            if len(seen) > max_elements:
                raise BudgetExceeded(f"more than {max_elements} elements within the search window")
            frontier.append(kx)
    kept = [(g, w) for g, w in seen.values() if g.frobenius_norm <= bound + 1e-9]
    return [g for g, _ in kept], {g.key(): w for g, w in kept}


def enumerate_elements(group: GroupPresentation, norm_bound: float, method="auto",
                       max_elements=2_000_000, window=None) -> ElementSet:
    """Distinct group elements (up to sign) of Frobenius norm at most norm_bound.

    For the modular group the default walks the integer lattice and is
    complete.  Otherwise words in the generators are explored breadth first,
    keeping every element of norm up to `window` times the bound (default: the
    largest generator norm squared); such a search is not certified complete.
    """
    if not norm_bound >= math.sqrt(2) - 1e-12:
        raise DomainError("norm_bound must be at least sqrt(2)")
    if method == "auto":
        method = "lattice" if group.is_modular else "bfs"
    if method == "lattice":
        if not group.is_modular:
            raise DomainError("the lattice walk is only available for the modular group")
        els = _modular_lattice(norm_bound)
        if len(els) > max_elements:
            raise BudgetExceeded(f"{len(els)} elements exceed the budget {max_elements}")
        els.sort(key=lambda g: (g.frobenius_norm, g.key()))
        return ElementSet(els, norm_bound, True)
    if method != "bfs":
        raise DomainError(f"unknown enumeration method {method!r}")
    if window is None:
        window = max(g.frobenius_norm for g in group.generators) ** 2
    els, words = _bfs(group, norm_bound, max_elements, window)
    els.sort(key=lambda g: (g.frobenius_norm, g.key()))
    return ElementSet(els, norm_bound, False, words)


# ---------------------------------------------------------------- hyperbolic classes


@dataclass
class HyperbolicClass:
    multiplier: float
    trace: float
    representative: MoebiusMap
    word: str = ""
    incomplete: bool = False


@dataclass
class ClassList:
    classes: list
    incomplete: bool
    trace_max: float
    method: str


_R = (1, 1, 0, 1)
_L = (1, 0, 1, 1)


def _mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _min_rotation(word):
    return min(word[i:] + word[:i] for i in range(len(word)))


def _is_power(word):
    return (word + word).find(word, 1) < len(word)


def _modular_word_classes(trace_max):
    # Hyperbolic classes of the modular group with positive trace are the
    # cyclic words in R and L that use both letters.  Appending a letter never
    # lowers the trace, and a word with both letters has trace above its length.
    found = {}
    stack = [("R", _R), ("L", _L)]
    max_len = int(math.floor(trace_max)) + 1
    while stack:
        word, mat = stack.pop()
        tr = mat[0] + mat[3]
        if tr > trace_max:
            continue
        if "R" in word and "L" in word:
            key = _min_rotation(word)
            if key not in found and not _is_power(key):
                found[key] = None
        if len(word) < max_len:
            stack.append((word + "R", _mul(mat, _R)))
            stack.append((word + "L", _mul(mat, _L)))
    out = []
    for key in found:
        mat = (1, 0, 0, 1)
        for ch in key:
            mat = _mul(mat, _R if ch == "R" else _L)
        tr = mat[0] + mat[3]
        out.append(HyperbolicClass(multiplier_from_trace(tr), float(tr), MoebiusMap(*mat), key))
    out.sort(key=lambda c: (c.multiplier, c.word))
    return out


def _root(x: MoebiusMap, k):
    # hyperbolic h with h^k = x: same fixed points, multiplier lam^(1/k)
    m = np.array([[x.a, x.b], [x.c, x.d]])
    vals, vecs = np.linalg.eig(m)
    if np.any(np.abs(vals.imag) > 1e-12):
        return None
    vals = vals.real
    sgn = np.sign(vals[0])
    roots = np.abs(vals) ** (1.0 / k)
    if k % 2 == 0 and sgn < 0:
        return None
    h = vecs.real @ np.diag(roots) @ np.linalg.inv(vecs.real)
    if abs(np.linalg.det(h) - 1) > 1e-8:
        return None
    return MoebiusMap(*h.ravel())


def _canon_rows(arr):
    # sign-normalized, rounded rows as a sortable void view
    arr = np.asarray(arr, dtype=float)
    lead = np.where(np.abs(arr[:, 0]) > 1e-12, arr[:, 0],
                    np.where(np.abs(arr[:, 1]) > 1e-12, arr[:, 1], arr[:, 2]))
    out = np.round(arr * np.sign(lead)[:, None], ROUND_DECIMALS) + 0.0
    out = np.ascontiguousarray(out)
    return out.view(np.dtype((np.void, out.dtype.itemsize * 4))).ravel()


def _matmul_rows(x, y):
    a, b, c, d = x.T
    e, f, g, h = y.T
    return np.stack([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], axis=1)


def _search_classes(group, trace_max, norm_bound, max_elements):
    ball = enumerate_elements(group, norm_bound, max_elements=max_elements)
    hyper = [g for g in ball if classify(g) is ElementKind.HYPERBOLIC and abs(g.trace) <= trace_max + 1e-9]
    if not hyper:
        return []
    conj = np.array([g.entries() for g in ball])
    inv = conj[:, [3, 1, 2, 0]] * np.array([1.0, -1.0, -1.0, 1.0])
    ball_keys = np.sort(_canon_rows(conj))
    lam_min = min(multiplier_from_trace(g.trace) for g in hyper)
    buckets = {}
    for g in hyper:
        buckets.setdefault(round(abs(g.trace), ROUND_DECIMALS), []).append(g)
    classes = []
    for _, members in sorted(buckets.items()):
        mk = _canon_rows([g.entries() for g in members])
        order = np.argsort(mk)
        sorted_mk = mk[order]
        parent = list(range(len(members)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, x in enumerate(members):
            # every conjugate c x c^-1 with c in the ball, in one batch
            xs = np.broadcast_to(np.array(x.entries()), conj.shape)
            yk = _canon_rows(_matmul_rows(_matmul_rows(conj, xs), inv))
            pos = np.searchsorted(sorted_mk, yk)
            pos = np.minimum(pos, sorted_mk.size - 1)
            hit = sorted_mk[pos] == yk
            for j in set(order[pos[hit]].tolist()):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
        groups = {}
        for i in range(len(members)):
            groups.setdefault(find(i), []).append(members[i])
        for reps in groups.values():
            rep = min(reps, key=lambda g: (g.frobenius_norm, g.key()))
            lam = multiplier_from_trace(rep.trace)
            # imprimitive when some member is a proper power of an element of the ball
            k_top = int(math.floor(math.log(lam) / math.log(lam_min) + 1e-9))
            power = False
            for k in range(2, k_top + 1):
                roots = [h for h in (_root(x, k) for x in reps) if h is not None]
                if roots:
                    rk = _canon_rows([h.entries() for h in roots])
                    pos = np.minimum(np.searchsorted(ball_keys, rk), ball_keys.size - 1)
                    if np.any(ball_keys[pos] == rk):
                        power = True
                        break
            if not power:
                classes.append(HyperbolicClass(lam, float(abs(rep.trace)), rep, "", True))
    classes.sort(key=lambda c: (c.multiplier, c.representative.key()))
    return classes


def primitive_hyperbolic_classes(group: GroupPresentation, trace_max: float, method="auto",
                                 norm_bound=None, max_elements=2_000_000) -> ClassList:
    """One representative per primitive hyperbolic conjugacy class with |trace| <= trace_max.

    The modular group uses cyclic words in R = [[1,1],[0,1]] and L = [[1,0],[1,1]]
    and is exact.  method="search" (the only option for other groups) buckets
    the hyperbolic elements of a norm ball by trace and merges conjugates found
    with conjugators from the same ball; its result is flagged incomplete.
    """
    if not trace_max > 2:
        raise DomainError("trace_max must exceed 2")
    if method == "auto":
        method = "words" if group.is_modular else "search"
    if method == "words":
        if not group.is_modular:
            raise DomainError("the word method is only available for the modular group")
        return ClassList(_modular_word_classes(trace_max), False, trace_max, "words")
    if method != "search":
        raise DomainError(f"unknown class method {method!r}")
    if norm_bound is None:
        norm_bound = 3.0 * trace_max
    return ClassList(_search_classes(group, trace_max, norm_bound, max_elements), True, trace_max, "search")


# ---------------------------------------------------------------- Selberg zeta


@dataclass
class SelbergValue:
    value: float
    log_value: float
    classes: int
    k_terms: int
    truncated: bool
    incomplete: bool = False


def selberg_z_from_multipliers(multipliers, s: float, k_max=None) -> SelbergValue:
    """Partial Selberg product over the given primitive multipliers."""
    if not s > 1:
        raise DivergentParameterRegion("the Selberg product needs s > 1")
    total, k_used, truncated = [], 0, False
    for lam in multipliers:
        k = 0
        while True:
            t = lam ** (-s - k)
            if t < SELBERG_TERM_FLOOR:
                break
            if k_max is not None and k > k_max:
                truncated = True
                break
            total.append(math.log1p(-t))
            k += 1
        k_used = max(k_used, k)
    log_z = math.fsum(total)
    return SelbergValue(math.exp(log_z), log_z, len(list(multipliers)), k_used, truncated)


def selberg_z(group: GroupPresentation, s: float, trace_max: float, k_max=None, **class_options) -> SelbergValue:
    if not s > 1:
        raise DivergentParameterRegion("the Selberg product needs s > 1")
    if not trace_max > 2:
        return SelbergValue(1.0, 0.0, 0, 0, False)
    cl = primitive_hyperbolic_classes(group, trace_max, **class_options)
    out = selberg_z_from_multipliers([c.multiplier for c in cl.classes], s, k_max)
    out.incomplete = cl.incomplete
    return out


# ---------------------------------------------------------------- determinant


@dataclass(frozen=True)
class DetInput:
    signature: Signature
    n: int
    A: float | None = None
    trace_max: float = 20.0
    k_max: int | None = None
    gamma2_convention: str = "gz_2pi"

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be >= 1")


def det_constant(inp: DetInput):
    """log of the constant multiplying Z(n) in det' of the n-Laplacian, with each factor's log."""
    sig, n = inp.signature, inp.n
    if sig.q >= 1 and inp.A is None:
        raise MissingA("A must be supplied when the surface has cusps")
    A = 0.0 if inp.A is None else float(inp.A)
    area = hyperbolic_area(sig)
    lg = lambda x: gamma_ln(x).real
    parts = {}
    parts["area"] = area / (4 * math.pi) * (
        (2 * n - 1) * math.log(2 * math.pi)
        + 2 * double_gamma_ln(2 * n, inp.gamma2_convention)
        + (2 * n - 1) * lg(2 * n)
    )
    ell = 0.0
    for m in sig.orders:
        alpha = lambda k: least_positive_residue(m, k)
        ell += (2 * alpha(-n) + 1 - m) / (2 * m) * math.log(m)
        ell += math.fsum((2 * alpha(r - n) + 1 - m) / (2 * m) * lg(r / m) for r in range(1, m))
        ell += math.fsum((2 * alpha(r + n) + 1 - m) / (2 * m) * lg((2 * n + r) / m) for r in range(m))
    parts["elliptic"] = ell
    parts["cusp"] = sig.q / 2 * ((2 * n - 1) * math.log(2) - math.log(math.pi) - lg(2 * n))
    dn = cusp_form_dimension(sig, n)
    parts["dimension"] = -dn * math.log(2 * n - 1)
    parts["A"] = A / 2 * math.log(n - 0.5)
    B = -area / (2 * math.pi)
    coeff = {}
    for m in sig.orders:
        a = least_positive_residue(m, n)
        coeff[m] = (m * m - 1) / (6 * m) - a * (m - a) / m
    D = (area / math.pi * zeta_prime_minus_one() + sig.q / 2 * math.log(2 * math.pi)
         + math.fsum(coeff[m] * math.log(m) for m in sig.orders))
    parts["exponential"] = B * (n - 0.5) ** 2 + D
    log_cn = math.fsum(parts.values())
    breakdown = dict(parts)
    breakdown.update({"B": B, "D": D, "D_elliptic_coeff": coeff, "d_n": dn,
                      "gamma2_convention": inp.gamma2_convention, "A_value": A})
    return log_cn, breakdown


@dataclass
class DetValue:
    log_value: float
    log_constant: float
    selberg: SelbergValue
    breakdown: dict


def det_laplacian(inp: DetInput, group: GroupPresentation) -> DetValue:
    """log det' of the n-Laplacian as log C_n + log Z(n), Z from the partial product."""
    if inp.n == 1:
        raise UnsupportedN1("n = 1 needs Z'(1), which a partial product cannot give")
    log_cn, parts = det_constant(inp)
    z = selberg_z(group, float(inp.n), inp.trace_max, inp.k_max)
    return DetValue(log_cn + z.log_value, log_cn, z, parts)
