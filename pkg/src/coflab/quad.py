"""Adaptive Gauss-Kronrod quadrature: 1-D, nested 2-D (disc, strips) and Fourier line integrals.

The engine integrates many integrals at once. Every panel carries the id of
the integral it belongs to, and the integrand is called on a whole batch of
panels per round, so nested integrals cost one vectorized call per round
instead of one Python call per outer node.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy import integrate as _sp_integrate

from .errors import DomainError, NonFiniteIntegrand, NotConverged

# 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21)
_XK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_XK = np.concatenate([_XK, -_XK[-2::-1]])
_WK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WK = np.concatenate([_WK, _WK[-2::-1]])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])
_WG = np.concatenate([_WG, _WG[::-1]])

EPS = np.finfo(float).eps
_NODES = 21
# panels (all live in a unit parameter interval) narrower than this are not split
_MIN_REL_WIDTH = 1e-14
# geometric grading towards a hinted singular point: breakpoints at d * 2^-j
_GRADING_LEVELS = 40


def gauss_kronrod_nodes():
    """Nodes on [-1, 1], Kronrod weights, and Gauss weights for the odd-indexed nodes."""
    return _XK.copy(), _WK.copy(), _WG.copy()


class Transform(Enum):
    NONE = "none"
    SEMI_INF_EXP = "semi_inf_exp"
    SEMI_INF_RATIONAL = "semi_inf_rational"


@dataclass(frozen=True)
class QuadSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_evals: int = 20_000_000
    transform: Transform = Transform.NONE
    singular_hints: tuple = ()
    decay_rate: float | None = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("rel_tol and abs_tol must be positive")
        if self.max_evals < 1000:
            raise DomainError("max_evals must be at least 1000")
        if self.decay_rate is not None and not self.decay_rate > 0:
            raise DomainError("decay_rate must be positive")
        object.__setattr__(self, "singular_hints", tuple(self.singular_hints))

    def refined(self, factor=10.0):
        return replace(self, rel_tol=self.rel_tol / factor, abs_tol=self.abs_tol / factor)

    def tolerance(self, value):
        return max(self.abs_tol, self.rel_tol * float(np.max(np.abs(value))))


@dataclass
class QuadResult:
    value: complex
    err_estimate: float
    evals: int
    converged: bool
    meta: dict = field(default_factory=dict)

    @property
    def real(self):
        return self.value.real

    def __add__(self, other):
        return QuadResult(
            self.value + other.value,
            self.err_estimate + other.err_estimate,
            self.evals + other.evals,
            self.converged and other.converged,
        )


# ---------------------------------------------------------------- axes
# An axis maps a parameter t in [0, 1] (per integral id) to one or more
# branches (y, dy/dt).  Folded axes return two branches.


class _Affine:
    def __init__(self, lo, hi):
        self.lo = np.atleast_1d(np.asarray(lo, dtype=float))
        self.hi = np.atleast_1d(np.asarray(hi, dtype=float))

    def branches(self, t, ids):
        lo = self.lo[ids][:, None]
        width = (self.hi - self.lo)[ids][:, None]
        return [(lo + width * t, np.broadcast_to(width, t.shape))]

    def t_of(self, y, idx=0):
        return (y - self.lo[idx]) / (self.hi[idx] - self.lo[idx])


class _SemiInfinite:
    def __init__(self, start, kind, rate=None, scale=1.0):
        self.start, self.kind, self.rate, self.scale = float(start), kind, rate, scale

    def branches(self, t, ids):
        one_minus = 1.0 - t
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.kind is Transform.SEMI_INF_EXP:
                y = self.start - np.log(one_minus) / self.rate
                jac = 1.0 / (self.rate * one_minus)
            else:
                y = self.start + self.scale * t / one_minus
                jac = self.scale / one_minus ** 2
        return [(y, jac)]

    def t_of(self, y, idx=0):
        d = y - self.start
        if self.kind is Transform.SEMI_INF_EXP:
            return 1.0 - math.exp(-self.rate * d)
        return d / (d + self.scale)


class _Folded:
    """The whole real line, folded about a centre and mapped rationally."""

    def __init__(self, center=0.0, scale=1.0):
        self.half = _SemiInfinite(0.0, Transform.SEMI_INF_RATIONAL, scale=scale)
        self.center = center

    def branches(self, t, ids):
        (d, jac), = self.half.branches(t, ids)
        return [(self.center + d, jac), (self.center - d, jac)]

    def t_of(self, y, idx=0):
        return self.half.t_of(abs(y - self.center))


def _make_axis(a, b, spec):
    a, b = float(a), float(b)
    if math.isinf(a) and math.isinf(b):
        return _Folded(), 1.0
    if math.isinf(a):
        raise DomainError("use a finite lower limit or integrate_real_line")
    if math.isinf(b):
        kind = spec.transform
        if kind is Transform.NONE:
            kind = Transform.SEMI_INF_EXP if spec.decay_rate else Transform.SEMI_INF_RATIONAL
        if kind is Transform.SEMI_INF_EXP and not spec.decay_rate:
            raise DomainError("SEMI_INF_EXP needs decay_rate")
        return _SemiInfinite(a, kind, spec.decay_rate), 1.0
    if b < a:
        return _Affine(b, a), -1.0
    return _Affine(a, b), 1.0


def _graded_breaks(hints_t):
    """Breakpoints in [0, 1] graded geometrically towards each hinted t."""
    pts = {0.0, 1.0}
    for c in hints_t:
        if not 0.0 <= c <= 1.0:
            continue
        pts.add(c)
        for side in (-1.0, 1.0):
            room = (1.0 - c) if side > 0 else c
            if room <= 0:
                continue
            for j in range(1, _GRADING_LEVELS + 1):
                pts.add(c + side * room * 2.0 ** -j)
    return np.array(sorted(pts))


class _Pieces:
    """Split [0, 1] at hinted points; next to a hint use t = c +- L u^2.

    The square-root substitution keeps the sample points away from the
    singular point in relative terms, which plain bisection in t cannot do
    once the panels approach the spacing of doubles near c.
    """

    def __init__(self, hints_t):
        cuts = sorted({0.0, 1.0} | {float(c) for c in hints_t if 0.0 <= c <= 1.0})
        singular = {float(c) for c in hints_t}
        lo, hi, mode = [], [], []
        for p, q in zip(cuts[:-1], cuts[1:]):
            if q <= p:
                continue
            left, right = p in singular, q in singular
            if left and right:
                m = 0.5 * (p + q)
                lo += [p, m]
                hi += [m, q]
                mode += [1, 2]
            else:
                lo.append(p)
                hi.append(q)
                mode.append(1 if left else 2 if right else 0)
        self.lo, self.hi, self.mode = np.array(lo), np.array(hi), np.array(mode)

    def __len__(self):
        return self.lo.size

    def map(self, u, ids):
        lo = self.lo[ids][:, None]
        hi = self.hi[ids][:, None]
        mode = self.mode[ids][:, None]
        L = hi - lo
        t = np.where(mode == 1, lo + L * u * u, np.where(mode == 2, hi - L * u * u, lo + L * u))
        jac = np.where(mode == 0, L, 2 * L * u)
        return t, jac


# ---------------------------------------------------------------- engine


def _evaluate_panels(fun, lo, hi, ids):
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    t = c[:, None] + h[:, None] * _XK[None, :]
    vals, extra_err = fun(t, ids)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteIntegrand("integrand returned a non-finite value")
    # vals: (P, 21, V)
    kron = np.einsum("pnv,n->pv", vals, _WK) * h[:, None]
    gauss = np.einsum("pnv,n->pv", vals[:, 1::2, :], _WG) * h[:, None]
    resabs = np.einsum("pnv,n->pv", np.abs(vals), _WK) * np.abs(h)[:, None]
    floor = 50 * EPS * resabs
    trunc = np.abs(kron - gauss)
    roundoff_limited = np.all(trunc <= floor, axis=1)
    err = np.max(np.maximum(trunc, floor), axis=1)
    if extra_err is not None:
        err = err + np.einsum("pn,n->p", extra_err, _WK) * np.abs(h)
    return kron, err, roundoff_limited


def _adaptive(fun, panels_lo, panels_hi, panel_ids, n_integrals, rel_tol, abs_tol, max_evals,
              group=None, evals_per_node=1):
    """Adaptive bisection over a batch of integrals.

    fun(t, ids) -> (values (P, 21, V), extra_err (P, 21) or None).  `group`
    maps integral ids to groups whose summed value is what must meet the
    tolerance (pieces of one integral).  Returns per-group values (G, V),
    errors (G,), the evaluation count and the converged mask per group.
    """
    lo, hi, ids = np.asarray(panels_lo, float), np.asarray(panels_hi, float), np.asarray(panel_ids)
    group = np.arange(n_integrals) if group is None else np.asarray(group)
    n_groups = int(group.max()) + 1
    val, err, rlim = _evaluate_panels(fun, lo, hi, ids)
    evals = lo.size * _NODES * evals_per_node
    while True:
        gid = group[ids]
        total = np.zeros((n_groups, val.shape[1]), dtype=complex)
        np.add.at(total, gid, val)
        total_err = np.bincount(gid, weights=err, minlength=n_groups)
        tol = np.maximum(abs_tol, rel_tol * np.max(np.abs(total), axis=1))
        converged = total_err <= tol
        width_ok = np.abs(hi - lo) > _MIN_REL_WIDTH * np.maximum(1.0, np.maximum(np.abs(lo), np.abs(hi)))
        active = ~converged[gid] & width_ok & ~rlim
        if not active.any() or evals >= max_evals:
            break
        # split panels carrying a large share of their group's remaining error
        max_err = np.zeros(n_groups)
        np.maximum.at(max_err, gid[active], err[active])
        pick = active & (err >= 0.1 * max_err[gid])
        budget_panels = max(1, int((max_evals - evals) // (2 * _NODES * evals_per_node)))
        where = np.nonzero(pick)[0]
        if where.size > budget_panels:
            where = where[np.argsort(-err[where])[:budget_panels]]
        mid = 0.5 * (lo[where] + hi[where])
        new_lo = np.concatenate([lo[where], mid])
        new_hi = np.concatenate([mid, hi[where]])
        new_ids = np.concatenate([ids[where], ids[where]])
        nv, ne, nr = _evaluate_panels(fun, new_lo, new_hi, new_ids)
        evals += new_lo.size * _NODES * evals_per_node
        keep = np.ones(lo.size, dtype=bool)
        keep[where] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        ids = np.concatenate([ids[keep], new_ids])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        rlim = np.concatenate([rlim[keep], nr])
    return total, total_err, evals, converged


def _initial_panels(breaks_per_id):
    lo, hi, ids = [], [], []
    for i, br in enumerate(breaks_per_id):
        lo.append(br[:-1])
        hi.append(br[1:])
        ids.append(np.full(br.size - 1, i))
    return np.concatenate(lo), np.concatenate(hi), np.concatenate(ids)


def _as_values(arr, shape):
    """Integrand output -> (P, 21, V) complex."""
    if arr.shape == shape:
        return arr[..., None]
    if arr.ndim == len(shape) + 1 and arr.shape[1:] == shape:
        return np.moveaxis(arr, 0, -1)
    raise DomainError(f"integrand returned shape {arr.shape}, expected {shape} or (V, *{shape})")


def _call_flat(f, y):
    with np.errstate(all="ignore"):
        arr = np.asarray(f(y.ravel()), dtype=complex)
    if arr.ndim == 0:
        return np.full(y.shape, arr)
    if arr.shape[-1] == y.size:
        return arr.reshape(arr.shape[:-1] + y.shape)
    raise DomainError(f"integrand returned shape {arr.shape} for {y.size} points")


def _branch_sum(f, branches, shape):
    total = None
    for y, jac in branches:
        fy = _as_values(_call_flat(f, y), shape)
        # points mapped to infinity contribute nothing
        bad = ~np.isfinite(jac) | ~np.isfinite(y)
        contrib = fy * np.where(bad, 0.0, jac)[..., None]
        contrib[bad] = 0.0
        total = contrib if total is None else total + contrib
    return total


def _integrate_axis(f, axis, hints_t, spec, sign=1.0):
    pieces = _Pieces(hints_t)
    zeros = None

    def fun(u, pid):
        nonlocal zeros
        t, jt = pieces.map(u, pid)
        if zeros is None or zeros.size != pid.size:
            zeros = np.zeros(pid.size, dtype=int)
        vals = _branch_sum(f, axis.branches(t, zeros), t.shape)
        return vals * jt[..., None], None

    lo, hi, ids = _initial_panels([np.array([0.0, 0.5, 1.0])] * len(pieces))
    group = np.zeros(len(pieces), dtype=int)
    value, err, evals, conv = _adaptive(fun, lo, hi, ids, len(pieces), spec.rel_tol, spec.abs_tol,
                                        spec.max_evals, group=group)
    value = value[0] * sign
    value = complex(value[0]) if value.size == 1 else value
    return QuadResult(value, float(err[0]), int(evals), bool(conv[0]))


def _hints_to_t(axis, hints):
    out = []
    for c in hints:
        try:
            out.append(float(axis.t_of(float(c))))
        except (ValueError, ZeroDivisionError, OverflowError):
            continue
    return out


# ---------------------------------------------------------------- 1-D


def integrate_1d(f, a, b, spec: QuadSpec | None = None, raise_on_failure=True) -> QuadResult:
    """Integral of f over (a, b); b may be +inf, both limits may be infinite.

    f takes a 1-D array of points and returns values of the same length, or an
    array (V, N) for a vector of integrands sharing the panels.
    """
    spec = spec or QuadSpec()
    axis, sign = _make_axis(a, b, spec)
    res = _integrate_axis(f, axis, _hints_to_t(axis, spec.singular_hints), spec, sign)
    if not res.converged and raise_on_failure:
        raise NotConverged(f"1-D quadrature did not converge (err {res.err_estimate:.3e})", res)
    return res


def integrate_real_line(f, spec: QuadSpec | None = None, center=0.0, scale=1.0,
                        raise_on_failure=True) -> QuadResult:
    """Integral of f over the real line, folded about `center` and mapped to [0, 1)."""
    spec = spec or QuadSpec()
    axis = _Folded(center, scale)
    res = _integrate_axis(f, axis, _hints_to_t(axis, spec.singular_hints), spec)
    if not res.converged and raise_on_failure:
        raise NotConverged(f"line quadrature did not converge (err {res.err_estimate:.3e})", res)
    return res


# ---------------------------------------------------------------- nested 2-D


def integrate_nested(f, outer, inner, spec: QuadSpec | None = None, outer_hints_t=(), inner_hints_t=(),
                     raise_on_failure=True, outer_measure=1.0, inner_rel=None) -> QuadResult:
    """Iterated integral  int d(outer) int d(inner) f(x, y).

    `outer` is an axis over t in [0, 1]; `inner(x)` builds the inner axis for
    an array of outer points x.  f(x, y) gets equally shaped arrays.  The inner
    integrals for every outer node of a round are done in one batch, and
    their error estimates are integrated into the outer error.  outer_measure
    is the length of the outer range; the inner absolute tolerance is divided
    by it so that the integrated inner errors fit in the outer budget.
    inner_rel overrides the inner relative tolerance (default rel_tol / 4);
    integrands whose inner integrals cancel across the outer variable need it
    smaller.
    """
    spec = spec or QuadSpec()
    inner_rel = spec.rel_tol / 4 if inner_rel is None else inner_rel
    inner_abs = spec.abs_tol / (4 * max(1.0, outer_measure))
    inner_breaks = _graded_breaks(inner_hints_t)
    counter = {"evals": 0, "inner_failures": 0}

    def outer_fun(t_out, pid_out):
        branches = outer.branches(t_out, pid_out)
        total, total_err = None, None
        for x_out, jac_out in branches:
            xs = x_out.ravel()
            jo = jac_out.ravel()
            finite = np.isfinite(jo) & np.isfinite(xs)
            xs_eval = np.where(finite, xs, 0.0)
            m = xs.size
            in_axis = inner(xs_eval)

            def fun(t, ids, in_axis=in_axis, xs_eval=xs_eval):
                acc = None
                for y, jac in in_axis.branches(t, ids):
                    xb = np.broadcast_to(xs_eval[ids][:, None], y.shape)
                    with np.errstate(all="ignore"):
                        vals = np.asarray(f(xb, y), dtype=complex)
                    bad = ~np.isfinite(jac)
                    vals = vals * np.where(bad, 0.0, jac)
                    vals[bad] = 0.0
                    acc = vals if acc is None else acc + vals
                return acc[..., None], None

            lo, hi, ids = _initial_panels([inner_breaks] * m)
            val, err, ev, conv = _adaptive(fun, lo, hi, ids, m, inner_rel, inner_abs, spec.max_evals)
            counter["evals"] += ev
            counter["inner_failures"] += int((~conv).sum())
            v = val[:, 0] * np.where(finite, jo, 0.0)
            e = err * np.abs(np.where(finite, jo, 0.0))
            v = v.reshape(t_out.shape)
            e = e.reshape(t_out.shape)
            total = v if total is None else total + v
            total_err = e if total_err is None else total_err + e
        return total[..., None], total_err

    lo, hi, ids = _initial_panels([_graded_breaks(outer_hints_t)])
    value, err, _, conv = _adaptive(outer_fun, lo, hi, ids, 1, spec.rel_tol, spec.abs_tol, spec.max_evals // 400)
    evals = counter["evals"]
    res = QuadResult(complex(value[0, 0]), float(err[0]), evals, bool(conv[0]),
                     {"inner_unconverged": counter["inner_failures"]})
    if evals > spec.max_evals:
        res.converged = False
    if not res.converged and raise_on_failure:
        raise NotConverged(f"nested quadrature did not converge (err {res.err_estimate:.3e})", res)
    return res


def _disc_centered(f, spec, log_at_center, raise_on_failure):
    outer = _Affine(0.0, 1.0)

    def inner(r):
        return _Affine(np.zeros_like(r), np.full_like(r, 2 * math.pi))

    def g(r, theta):
        return f(r * np.exp(1j * theta)) * r

    hints = (0.0,) if log_at_center else ()
    return integrate_nested(g, outer, inner, spec, outer_hints_t=hints, raise_on_failure=raise_on_failure)


def integrate_disc(f, spec: QuadSpec | None = None, hint=None, local=False,
                   raise_on_failure=True) -> QuadResult:
    """Integral of f over the unit disc with respect to area d^2w.

    hint: a point p where f has an integrable logarithmic singularity, or a
    (w-p)^-2 type singularity that is integrable as a principal value.  Near
    p the angle is integrated first so that such terms cancel.  With
    local=True f is called as f(w, w - p), the offset being formed exactly;
    principal-value integrands should use it, since w - p recomputed from w
    loses the digits the angular cancellation relies on.  A disc of radius
    1e-10 (local) or 1e-8 (otherwise) times the distance scale about p is
    left out symmetrically.
    """
    spec = spec or QuadSpec()
    if hint is None:
        g = (lambda w: f(w, w)) if local else f
        return _disc_centered(g, spec, False, raise_on_failure)
    p = complex(hint)
    if abs(p) >= 1:
        raise DomainError("hint must lie inside the unit disc")
    if abs(p) < 1e-14:
        g = (lambda w: f(w, w - p)) if local else f
        return _disc_centered(g, spec, True, raise_on_failure)
    delta = 0.5 * (1.0 - abs(p))
    rho_min = delta * (1e-10 if local else 1e-8)

    def at(rho, theta):
        d = rho * np.exp(1j * theta)
        return f(p + d, d) if local else f(p + d)

    # small disc about p: radius outer, angle inner
    ball_outer = _Affine(rho_min, delta)

    def ball_inner(rho):
        return _Affine(np.zeros_like(rho), np.full_like(rho, 2 * math.pi))

    def ball_f(rho, theta):
        return at(rho, theta) * rho

    half_spec = replace(spec, abs_tol=spec.abs_tol / 2)
    ball = integrate_nested(ball_f, ball_outer, ball_inner, half_spec, outer_hints_t=(0.0,),
                            raise_on_failure=raise_on_failure)

    # the rest: angle outer, radius from delta out to the unit circle inner
    rest_outer = _Affine(0.0, 2 * math.pi)

    def rho_max(theta):
        b = (np.conj(p) * np.exp(1j * theta)).real
        return -b + np.sqrt(b * b + 1.0 - abs(p) ** 2)

    def rest_inner(theta):
        return _Affine(np.full_like(theta, delta), rho_max(theta))

    def rest_f(theta, rho):
        return at(rho, theta) * rho

    # the pole term makes each radial integral O(log(1/delta)) while the angle
    # integral cancels it, so the radial integrals need extra relative accuracy
    rest = integrate_nested(rest_f, rest_outer, rest_inner, half_spec, raise_on_failure=raise_on_failure,
                            outer_measure=2 * math.pi, inner_rel=spec.rel_tol / 64)
    out = ball + rest
    out.meta = {"ball": ball.value, "remainder": rest.value}
    return out


def integrate_strip(f, y_lo, y_hi, spec: QuadSpec | None = None, x_center=0.0, x_scale=1.0,
                    raise_on_failure=True) -> QuadResult:
    """Integral of f(x + iy) over the strip {y_lo < y < y_hi}, x over the whole real line."""
    spec = spec or QuadSpec()
    outer = _Affine(y_lo, y_hi)

    def inner(y):
        return _Folded(x_center, x_scale)

    def g(y, x):
        return f(x + 1j * y)

    return integrate_nested(g, outer, inner, spec, raise_on_failure=raise_on_failure,
                            outer_measure=abs(y_hi - y_lo))


def integrate_half_strip(f, decay_rate, spec: QuadSpec | None = None, raise_on_failure=True) -> QuadResult:
    """Integral of f(x + iy) over 0 <= x <= 1, y > 0 for f decaying like e^(-decay_rate y)."""
    spec = spec or QuadSpec()
    outer = _SemiInfinite(0.0, Transform.SEMI_INF_EXP, decay_rate)

    def inner(y):
        return _Affine(np.zeros_like(y), np.ones_like(y))

    def g(y, x):
        return f(x + 1j * y)

    return integrate_nested(g, outer, inner, spec, raise_on_failure=raise_on_failure)


# ---------------------------------------------------------------- Fourier lines


def integrate_line_osc(f, k, spec: QuadSpec | None = None, shift=0.0, raise_on_failure=True) -> QuadResult:
    """int_R f(u) e^(2 pi i k u) du for f decaying at least like 1/u.

    With shift = h the line is moved to Im u = h, which the caller certifies
    lies in a region where f is analytic together with the strip between.
    A central window is done by the adaptive engine and the two tails by
    QUADPACK's Fourier-integral routine (QAWF).
    """
    spec = spec or QuadSpec()
    k = float(k)
    if k == 0:
        raise DomainError("frequency k must be nonzero")
    omega = 2 * math.pi * k
    damp = math.exp(-omega * shift)
    x0 = max(1.0, 4.0 / abs(k))

    def g(x):
        return f(x + 1j * shift)

    core = integrate_1d(lambda x: g(x) * np.exp(1j * omega * x), -x0, x0, spec.refined(4),
                        raise_on_failure=False)
    tail_eps = max(spec.abs_tol, spec.rel_tol * abs(core.value)) / 8
    sgn = 1.0 if omega > 0 else -1.0
    # f(u)e^{iwu} + f(-u)e^{-iwu} on [x0, inf): cosine part with the even
    # combination, sine part with the odd one
    parts = [
        ("cos", 1.0, lambda x: complex(g(x) + g(-x)).real),
        ("cos", 1j, lambda x: complex(g(x) + g(-x)).imag),
        ("sin", 1j * sgn, lambda x: complex(g(x) - g(-x)).real),
        ("sin", -sgn, lambda x: complex(g(x) - g(-x)).imag),
    ]
    tail, tail_err, messages = 0j, 0.0, []
    for weight, unit, fun in parts:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            v, e = _sp_integrate.quad(fun, x0, np.inf, weight=weight, wvar=abs(omega),
                                      epsabs=tail_eps, limlst=200, limit=400)
        messages += [str(w.message).splitlines()[0] for w in caught]
        tail += unit * v
        tail_err += abs(e)
    value = (core.value + tail) * damp
    err = (core.err_estimate + tail_err) * damp
    converged = core.converged and err <= spec.tolerance(value)
    res = QuadResult(value, err, core.evals, bool(converged), {"tail_warnings": messages})
    if not converged and raise_on_failure:
        raise NotConverged(f"Fourier line integral error {err:.3e} above tolerance", res)
    return res
