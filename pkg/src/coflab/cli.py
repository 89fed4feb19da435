"""Command-line front end: verification suites and single evaluations, printed as JSON or CSV.

Exit codes: 0 success, 1 a verification case failed, 2 bad usage or input
file, 3 a numerical routine did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from . import beltrami, contributions, group_zeta, kernels, specialfns
from .beltrami import CuspCoeffs, EllipticCoeffs
from .errors import CoflabError, DomainError, NotConverged
from .quad import QuadSpec

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOCONV = 0, 1, 2, 3
SUITES = ("identities", "kernels", "parabolic", "elliptic", "hyperbolic")


class UsageError(Exception):
    pass


@lru_cache(maxsize=1)
def eq_tags():
    text = resources.files("coflab").joinpath("data/eq_tags.json").read_text()
    return json.loads(text)


def _num(v):
    v = complex(v)
    return v.real if v.imag == 0 else [v.real, v.imag]


@dataclass
class Case:
    id: str
    tag: str
    run: object
    tol_abs: float
    tol_rel: float = 0.0


def _evaluate(case: Case, tol_abs, tol_rel, timing):
    t0 = time.perf_counter()
    out = case.run()
    lhs, rhs = out[0], out[1]
    evals = out[2] if len(out) > 2 else None
    # a fourth entry is an absolute tolerance derived from the run's own error estimate
    own_tol = out[3] if len(out) > 3 else case.tol_abs
    seconds = round(time.perf_counter() - t0, 4) if timing else None
    ta = own_tol if tol_abs is None else tol_abs
    tr = case.tol_rel if tol_rel is None else tol_rel
    abs_err = abs(complex(lhs) - complex(rhs))
    rel_err = abs_err / abs(complex(rhs)) if rhs != 0 else None
    ok = abs_err <= max(ta, tr * abs(complex(rhs)))
    return {"id": case.id, "paper_eq": eq_tags()[case.tag], "lhs": _num(lhs), "rhs": _num(rhs),
            "abs_err": abs_err, "rel_err": rel_err, "tol": {"abs": ta, "rel": tr}, "pass": bool(ok),
            "evals": evals, "seconds": seconds}


# ---------------------------------------------------------------- suites


def _rand_disc(seed, count, radius=0.7):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(0, 1, count))
    return r * np.exp(2j * math.pi * rng.uniform(0, 1, count))


def _rand_uhp(seed, count):
    rng = np.random.default_rng(seed)
    return rng.uniform(-2, 2, count) + 1j * rng.uniform(0.3, 3, count)


def identity_cases(args):
    cases = []
    for u in (0.1, 0.5, 1.0, 3.0, 10.0):
        cases.append(Case(f"green_vs_half_resolvent(u={u})", "green_half_resolvent",
                          lambda u=u: (2 * kernels.resolvent_profile(kernels.KernelParams(0, 2.0), u).value,
                                       kernels.green_kernel(u)), 1e-8))
    zs, ws = _rand_uhp(101, 20), _rand_uhp(202, 20)
    for i, (z, w) in enumerate(zip(zs, ws)):
        n = (1, 2, 3, 5)[i % 4]
        cases.append(Case(f"derivative_identity(n={n},pair={i})", "derivative_identity",
                          lambda n=n, z=z, w=w: kernels.resolvent_derivative_identity(n, z, w)[::-1], 1e-6))
    for n in (1, 2, 3, 7, 50):
        cases.append(Case(f"identity_coefficient_sum(n={n})", "identity_coefficients",
                          lambda n=n: (sum(contributions.identity_coefficients(n)),
                                       contributions.identity_contribution(n, 1.0)), 0.0, 1e-13))
    for r, k, a in ((0, 2, 0.5), (2, 5, 2.0), (5, 11, 0.5)):
        cases.append(Case(f"moment_identity(r={r},k={k},a={a})", "moment_identity",
                          lambda r=r, k=k, a=a: contributions.moment_integral(r, k, a), 0.0, 1e-10))
    for k in (2, 7, 30):
        grid = np.linspace(0, 0.99, 25)
        cases.append(Case(f"cubic_profile(k={k})", "cubic_profile",
                          lambda k=k, grid=grid: (float(np.max(np.abs((1 - grid) ** 3 * beltrami.square_sum_profile(k, grid)
                                                                       - beltrami.cubic_profile(k, grid)))), 0.0),
                          1e-12))
    for m, n in ((2, 1), (5, 3), (12, 7)):
        cases.append(Case(f"bconst_dual(m={m},n={n})", "bconst",
                          lambda m=m, n=n: (specialfns.elliptic_constant_from_root_sums(m, n),
                                            float(specialfns.elliptic_constant(m, n))), 1e-12))
    return cases


def _spec(args, check_tol):
    # ask the integrator for three more digits than the check itself needs
    budget = getattr(args, "max_evals", None) or QuadSpec.max_evals
    return QuadSpec(rel_tol=check_tol * 1e-3, abs_tol=check_tol * 1e-3, max_evals=budget)


def kernel_cases(args):
    cases = []
    rng_pts = _rand_disc(7, 15).reshape(5, 3)
    for i, (zeta, z, w) in enumerate(rng_pts):
        def run(zeta=zeta, z=z, w=w):
            r = kernels.xi_kernel_disc_quadrature(zeta, z, w, _spec(args, 1e-6))
            return r.value, kernels.xi_kernel_disc(zeta, z, w), r.evals
        cases.append(Case(f"xi_quadrature(triple={i})", "xi_quadrature", run, 0.0, 1e-6))
    for i, (zeta, eta) in enumerate(_rand_disc(11, 6).reshape(3, 2)):
        def run(zeta=zeta, eta=eta):
            r = kernels.lambda_kernel_quadrature(zeta, eta, _spec(args, 1e-5))
            return r.value, kernels.lambda_kernel(0, zeta, eta), r.evals
        cases.append(Case(f"lambda_quadrature(pair={i})", "lambda_quadrature", run, 0.0, 1e-5))
    for name, phi, z in (("1", lambda w: np.ones_like(w), 0.2 + 0.1j), ("w", lambda w: w, 0.5j),
                         ("w^3", lambda w: w ** 3, 0.4 + 0j)):
        def run(phi=phi, z=z):
            b = kernels.bergman_reproduce(phi, z)
            return b.projected, b.direct
        cases.append(Case(f"bergman_reproduce(phi={name})", "bergman", run, 0.0, 1e-6))
    cases.append(Case("green_normalization", "green_normalization",
                      lambda: (kernels.green_origin_normalization().value, 1.0), 1e-9))
    return cases


@lru_cache(maxsize=None)
def _parabolic(n, beta, ell_max):
    return contributions.parabolic_terms(n, CuspCoeffs(beta), ell_max=ell_max)


@lru_cache(maxsize=None)
def _elliptic(n, m, chi):
    return contributions.elliptic_terms(n, EllipticCoeffs(m, dict(chi)))


def parabolic_cases(args):
    cases = []
    ns = (args.n,) if args.n else (2, 3)
    L = args.ell_max
    for n in ns:
        if n < 2:
            raise UsageError("the parabolic suite needs --n >= 2")
        for label, beta in (("beta1", (1,)), ("mixed", (0.3, -1 + 0.2j, 0.5j))):
            def cancel(n=n, beta=beta):
                t = _parabolic(n, beta, L)
                return t.X + t.Y + t.Z2, 0.0, None, 5 * t.err + t.tail

            def total(n=n, beta=beta):
                t = _parabolic(n, beta, L)
                return t.total, math.pi / 9 * beltrami.tz_cusp_norm(CuspCoeffs(beta)), None, 5 * t.err + t.tail

            def routes(n=n, beta=beta):
                t = _parabolic(n, beta, L)
                return t.meta["Z2_zero_mode_route"], t.Z2, None, 5 * t.err + t.tail

            cases.append(Case(f"P_cancellation(n={n},{label})", "parabolic_cancellation", cancel, 0.0))
            cases.append(Case(f"P_total_vs_tz(n={n},{label})", "contrib-parabolic", total, 0.0))
            cases.append(Case(f"P_Z2_routes(n={n},{label})", "parabolic_cancellation", routes, 0.0))
        cases.append(Case(f"P_total_beta1(n={n})", "contrib-parabolic",
                          lambda n=n: (_parabolic(n, (1,), L).total, 1 / (384 * math.pi ** 4)), 0.0, 1e-6))
    cases.append(Case("P_weight_one", "parabolic_n1",
                      lambda: contributions.parabolic_weight_one(CuspCoeffs([1, 0.5])), 0.0, 1e-10))
    for i, c in enumerate(contributions.contour_step_checks()):
        cases.append(Case(f"contour_{c['kind']}(sample={i // 2})", "contour_step",
                          lambda c=c: (c["numeric"], c["closed"]), 0.0, 1e-6))
    cases.append(Case("P_vanishing", "p_vanishing",
                      lambda: (contributions.weight_one_vanishing_checks(CuspCoeffs([1, -0.4j]),
                                                                         EllipticCoeffs(2, {}))[0], 0.0), 1e-10))
    return cases


def elliptic_cases(args):
    cases = []
    ms = (args.m,) if args.m else (2, 3, 4)
    ns = (args.n,) if args.n else (2, 3, 4)
    for m in ms:
        if m < 2:
            raise UsageError("the elliptic suite needs --m >= 2")
        chi = ((m, 1 - 0.5j), (2 * m, 0.4), (3 * m, 0.2j))
        e = EllipticCoeffs(m, dict(chi))
        tz = beltrami.tz_elliptic_norm(e)
        for n in ns:
            if n < 2:
                raise UsageError("the elliptic suite needs --n >= 2")
            cases.append(Case(f"E_total_vs_B(m={m},n={n})", "contrib-elliptic",
                              lambda m=m, n=n, chi=chi, tz=tz: (_elliptic(n, m, chi).total,
                                                                float(specialfns.elliptic_constant(m, n)) * tz), 1e-8))
            cases.append(Case(f"E_total_vs_boundary(m={m},n={n})", "elliptic_boundary",
                              lambda m=m, n=n, chi=chi: (_elliptic(n, m, chi).total, _elliptic(n, m, chi).boundary),
                              1e-8))
            cases.append(Case(f"E_Z_routes(m={m},n={n})", "elliptic_zero_mode",
                              lambda m=m, n=n, chi=chi: (_elliptic(n, m, chi).meta["Z_zero_mode_route"],
                                                         _elliptic(n, m, chi).Z), 1e-8))
        cases.append(Case(f"E_weight_one(m={m})", "elliptic_n1", lambda e=e: contributions.elliptic_weight_one(e), 1e-13))
        cases.append(Case(f"Q_vanishing(m={m})", "q_vanishing",
                          lambda e=e: (contributions.weight_one_vanishing_checks(CuspCoeffs([0]), e)[1], 0.0), 1e-10))
    return cases


def hyperbolic_cases(args):
    cases = []
    for n in (2, 3, 5):
        for lam in (2.0, 4.0, 10.0):
            cases.append(Case(f"Q_integral(n={n},lambda={lam})", "qhyp",
                              lambda n=n, lam=lam: contributions.hyperbolic_class_integral(n, lam), 0.0, 1e-8))
    for n, lam, ldot in ((2, 4.0, 1.0), (3, 2.0, 0.7)):
        def run(n=n, lam=lam, ldot=ldot, eps=1e-6):
            logp = lambda x: math.fsum(math.log1p(-x ** (-k - n)) for k in range(400))
            fd = (logp(lam * (1 + eps * ldot)) - logp(lam * (1 - eps * ldot))) / (2 * eps)
            return contributions.local_zeta_variation(n, lam, ldot).value, fd
        cases.append(Case(f"local_zeta_fd(n={n},lambda={lam})", "local_zeta", run, 1e-5))
    for lam, expected in ((4.0, math.log(2)), (math.e ** 2, 1.0)):
        def run(lam=lam, expected=expected):
            r = contributions.multiplier_variation(lambda z: z.imag ** 2 / np.conj(z) ** 2, lam)
            return r.value, expected, r.evals
        cases.append(Case(f"multiplier_variation(lambda={lam:.6g})", "multiplier_variation", run, 0.0, 1e-6))
    modular = group_zeta.GroupPresentation.modular()
    cases.append(Case("shortest_geodesic", "shortest_geodesic",
                      lambda: (min(c.multiplier for c in group_zeta.primitive_hyperbolic_classes(modular, 3.5).classes),
                               ((3 + math.sqrt(5)) / 2) ** 2), 1e-9))
    cases.append(Case("selberg_truncation(10 vs 20)", "selberg",
                      lambda: (group_zeta.selberg_z(modular, 2.0, 10).value,
                               group_zeta.selberg_z(modular, 2.0, 20).value), 1e-3))
    return cases


SUITE_CASES = {"identities": identity_cases, "kernels": kernel_cases, "parabolic": parabolic_cases,
               "elliptic": elliptic_cases, "hyperbolic": hyperbolic_cases}


def _threads():
    try:
        return max(1, int(os.environ.get("COFLAB_THREADS", "1")))
    except ValueError:
        raise UsageError("COFLAB_THREADS must be an integer") from None


def run_suite(suite, args):
    names = SUITES if suite == "all" else (suite,)
    cases = [c for name in names for c in SUITE_CASES[name](args)]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        # map keeps case order, so the report does not depend on scheduling
        rows = list(pool.map(lambda c: _evaluate(c, args.tol_abs, args.tol_rel, args.timing), cases))
    passed = sum(r["pass"] for r in rows)
    return {"suite": suite, "cases": rows,
            "summary": {"passed": passed, "failed": len(rows) - passed, "skipped": 0}}


def _to_csv(report):
    buf = io.StringIO()
    fields = ["id", "paper_eq", "lhs", "rhs", "abs_err", "rel_err", "tol", "pass", "evals", "seconds"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in report["cases"]:
        w.writerow({k: json.dumps(row[k]) if isinstance(row[k], (list, dict)) else row[k] for k in fields})
    return buf.getvalue()


def cmd_verify(args):
    report = run_suite(args.suite, args)
    text = _to_csv(report) if args.format == "csv" else json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["summary"]["failed"] == 0 else EXIT_FAIL


# ---------------------------------------------------------------- eval


def _load_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {what} file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file {path} is not valid JSON: {exc.msg}") from None


def _coeffs(path, kind):
    if not path:
        raise UsageError("--coeffs is required for this target")
    data = _load_json(path, "coefficient")
    try:
        return CuspCoeffs.from_json(data) if kind == "cusp" else EllipticCoeffs.from_json(data)
    except (DomainError, TypeError, ValueError, AttributeError) as exc:
        raise UsageError(f"coefficient file {path}: {exc}") from None


def _signature(text):
    if not text:
        raise UsageError("--sig g,q,m1,... is required for this target")
    try:
        parts = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"--sig must be comma-separated integers, got {text!r}") from None
    if len(parts) < 2:
        raise UsageError("--sig needs at least g and q")
    try:
        return group_zeta.Signature(parts[0], parts[1], tuple(parts[2:]))
    except DomainError as exc:
        raise UsageError(f"--sig: {exc}") from None


def _group(path):
    if not path:
        return group_zeta.GroupPresentation.modular()
    data = _load_json(path, "group")
    try:
        return group_zeta.GroupPresentation.from_json(data)
    except (DomainError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"group file {path}: {exc}") from None


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for this target")


def _serial(v):
    if isinstance(v, dict):
        return {str(k): _serial(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_serial(x) for x in v]
    if isinstance(v, (complex, np.complexfloating)):
        return _num(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def evaluate_target(args):
    t = args.target
    out = {}
    if t == "kernel":
        _need(args, "u")
        n = 0 if args.n is None else args.n
        s = 2.0 if args.s is None else args.s
        v = kernels.resolvent_profile(kernels.KernelParams(n, s), args.u)
        out = {"value": v.value, "err": v.err, "terms": v.terms}
    elif t == "tz-cusp":
        out = {"value": beltrami.tz_cusp_norm(_coeffs(args.coeffs, "cusp")), "err": 0.0}
    elif t == "tz-ell":
        out = {"value": beltrami.tz_elliptic_norm(_coeffs(args.coeffs, "elliptic")), "err": 0.0}
    elif t == "contrib-parabolic":
        _need(args, "n")
        c = _coeffs(args.coeffs, "cusp")
        if args.n == 1:
            route, closed = contributions.parabolic_weight_one(c)
            out = {"value": closed, "err": abs(route - closed), "route": route}
        else:
            r = contributions.parabolic_terms(args.n, c, args.ell_max)
            out = {"value": r.total, "err": 5 * r.err + r.tail,
                   "terms": {"X": r.X, "Y": r.Y, "Z1": r.Z1, "Z2": r.Z2}}
    elif t == "contrib-elliptic":
        _need(args, "n")
        e = _coeffs(args.coeffs, "elliptic")
        if args.n == 1:
            route, closed = contributions.elliptic_weight_one(e)
            out = {"value": closed, "err": abs(route - closed), "route": route}
        else:
            r = contributions.elliptic_terms(args.n, e)
            out = {"value": r.total, "err": r.err,
                   "terms": {"X": r.X, "Y": r.Y, "Z": r.Z, "A0": r.A0, "B0": r.B0, "C0": r.C0}}
    elif t == "bconst":
        _need(args, "m", "n")
        out = {"value": float(specialfns.elliptic_constant(args.m, args.n)), "err": 0.0,
               "exact": str(specialfns.elliptic_constant(args.m, args.n))}
    elif t == "qhyp":
        _need(args, "n", "lam")
        integral, closed = contributions.hyperbolic_class_integral(args.n, args.lam)
        out = {"value": closed, "err": abs(integral - closed), "integral": integral}
    elif t == "selberg":
        s = 2.0 if args.s is None else args.s
        z = group_zeta.selberg_z(_group(args.group), s, args.trace_max, args.k_max)
        out = {"value": z.value, "err": None, "classes": z.classes, "truncated": z.truncated}
    elif t == "detn":
        _need(args, "n")
        sig = _signature(args.sig)
        inp = group_zeta.DetInput(sig, args.n, args.A, args.trace_max, args.k_max)
        if args.group or (sig.g, sig.q, sig.orders) == (0, 1, (2, 3)):
            d = group_zeta.det_laplacian(inp, _group(args.group))
            out = {"value": d.log_value, "err": None, "log_constant": d.log_constant,
                   "log_selberg": d.selberg.log_value, "breakdown": d.breakdown, "quantity": "log det"}
        else:
            log_cn, parts = group_zeta.det_constant(inp)
            out = {"value": log_cn, "err": None, "breakdown": parts, "quantity": "log C_n"}
        t = "detn" if "log_selberg" in out else "det_constant"
    elif t == "area":
        out = {"value": group_zeta.hyperbolic_area(_signature(args.sig)), "err": 0.0}
    elif t == "dim":
        _need(args, "n")
        out = {"value": group_zeta.cusp_form_dimension(_signature(args.sig), args.n), "err": 0}
    out["paper_eq"] = eq_tags()[t]
    return _serial(out)


def cmd_eval(args):
    print(json.dumps(evaluate_target(args), sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser():
    p = argparse.ArgumentParser(prog="coflab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rel", type=float, default=None)
    common.add_argument("--tol-abs", type=float, default=None)
    common.add_argument("--max-evals", type=int, default=None)
    common.add_argument("--timing", action="store_true", help="record wall time per case")
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--ell-max", type=int, default=contributions.DEFAULT_ELL_MAX)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES + ("all",))
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", parents=[common], help="evaluate one quantity")
    e.add_argument("target", choices=("kernel", "tz-cusp", "tz-ell", "contrib-parabolic", "contrib-elliptic",
                                       "bconst", "qhyp", "selberg", "detn", "area", "dim"))
    e.add_argument("--coeffs")
    e.add_argument("--group")
    e.add_argument("--sig")
    e.add_argument("--u", type=float)
    e.add_argument("--s", type=float)
    e.add_argument("--lam", type=float)
    e.add_argument("--A", type=float)
    e.add_argument("--trace-max", type=float, default=20.0)
    e.add_argument("--k-max", type=int)
    e.set_defaults(func=cmd_eval)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"coflab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotConverged as exc:
        print(f"coflab: not converged: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except (CoflabError, DomainError) as exc:
        print(f"coflab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
