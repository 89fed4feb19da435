"""Reference values for the resolvent profile, from mpmath's hypergeometric 2F1."""

import mpmath as mp

mp.mp.dps = 40


def psi(n, s, u, deriv=0):
    f = lambda x: (mp.gamma(s) * mp.gamma(s + 2 * n) / mp.gamma(2 * s + 2 * n) * (x + 1) ** (-s)
                   * mp.hyp2f1(s, s + 2 * n, 2 * s + 2 * n, 1 / (x + 1)) / (4 * mp.pi))
    return mp.diff(f, u, deriv) if deriv else f(u)


cases = [(0, 2, 0.5), (0, 2, 1), (0, 2, 2), (1, 1.5, 0.3), (2, 3, 0.1), (3, 0.75, 0.2),
         (1, 1, 0.05), (4, 2.5, 7.0), (1, mp.mpc(2, 0.5), 0.7)]
for n, s, u in cases:
    v = psi(n, s, mp.mpf(u))
    print((n, complex(s) if isinstance(s, mp.mpc) else float(s), u), complex(v) if isinstance(v, mp.mpc) else float(v))
for n, s, u, d in [(1, 1, 0.4, 1), (1, 1, 0.4, 2), (2, 1, 1.3, 1), (2, 1, 1.3, 2)]:
    print("d", (n, s, u, d), float(psi(n, s, mp.mpf(u), d)))
