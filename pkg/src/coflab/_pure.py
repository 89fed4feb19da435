"""Reference implementation of the compiled kernels, used when the extension is absent."""

import math

import numpy as np

EPS = 2.220446049250313e-16


def start_index(n, s):
    # beyond this index the term ratios are monotone and the tail is geometric
    return int(math.ceil(max(s * s + 2 * n * s + 2 * s + 2 * n, 0.0))) + 4


def psi_series(u, n, s, deriv, log_c0, abs_tol, k_max):
    """d^deriv/du^deriv of sum_k c_k (u+1)^(-k-s) for real s > 0, vector u > 0.

    c_0 = exp(log_c0) and c_(k+1)/c_k = (s+k)(s+2n+k)/((k+1)(2s+2n+k)).
    Returns sums, error bounds, terms used and a converged flag per point.
    """
    u = np.asarray(u, dtype=float)
    out = np.empty(u.shape)
    err = np.empty(u.shape)
    used = np.empty(u.shape, dtype=np.int64)
    ok = np.empty(u.shape, dtype=bool)
    k0 = start_index(n, s)
    rising = math.lgamma(s + deriv) - math.lgamma(s)
    for idx, uu in np.ndenumerate(u):
        q = 1.0 / (uu + 1.0)
        lq = math.log1p(uu)
        t = math.exp(log_c0 + rising - (s + deriv) * lq)
        total, mass, k, done, bound = 0.0, 0.0, 0, False, math.inf
        while k < k_max:
            total += t
            mass += abs(t)
            rho = (s + 2 * n + k) * (s + k + deriv) / ((k + 1.0) * (2 * s + 2 * n + k)) * q
            if k >= k0 and rho < 1.0:
                r = max(rho, q)
                bound = abs(t) * r / (1.0 - r)
                if bound < abs_tol:
                    done = True
                    break
            t *= rho
            k += 1
        sign = -1.0 if deriv % 2 else 1.0
        out[idx] = sign * total
        err[idx] = bound + EPS * (k + 1) * mass
        used[idx] = k + 1
        ok[idx] = done
    return out, err, used, ok
