"""Time the compiled and pure-Python resolvent series on the same inputs.

    python3 benchmarks/bench_backends.py [--points 2000] [--repeat 5]

Prints one line per (n, s, derivative) setting with both timings, the speedup
and the largest difference between the two backends.
"""

import argparse
import math
import time

import numpy as np

from coflab import _pure

try:
    from coflab import _accel
except ImportError:
    _accel = None

SETTINGS = [(0, 2.0, 0), (2, 1.0, 1), (3, 2.5, 2), (6, 1.0, 0)]


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _accel is None:
        print("compiled backend not built; run `pip install -e . --no-build-isolation` first")
        return 1
    # small u needs the most terms, so sample it densely
    u = np.geomspace(0.05, 50.0, args.points)
    print(f"{'n':>3} {'s':>5} {'d':>2} {'pure [ms]':>10} {'cython [ms]':>11} {'speedup':>8} {'max diff':>10}")
    for n, s, d in SETTINGS:
        log_c0 = math.lgamma(s) + math.lgamma(s + 2 * n) - math.lgamma(2 * s + 2 * n)
        call = (u, n, s, d, log_c0, 1e-14, 1_000_000)
        tp, (vp, *_) = best_time(lambda: _pure.psi_series(*call), args.repeat)
        tc, (vc, *_) = best_time(lambda: _accel.psi_series(*call), args.repeat)
        diff = float(np.max(np.abs(vp - vc)))
        print(f"{n:>3} {s:>5} {d:>2} {tp * 1e3:>10.2f} {tc * 1e3:>11.3f} {tp / tc:>8.1f} {diff:>10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
