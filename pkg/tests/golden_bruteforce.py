"""Plain-Python rerun of the homotopic method used to freeze golden values.

No numpy, no shared code with the package: schedule constants and updates
are written out directly. Run as ``python tests/golden_bruteforce.py``.
"""

import math

SV = [(0.5, 1.5), (1.5, 0.5)]


def paper_points():
    pts = []
    for m in (1, 2, 3, 4):
        for v in SV:
            pts.append(((m * v[0], m * v[1]), 1.0))
        for v in SV:
            pts.append(((-m * v[0], -m * v[1]), -1.0))
    return pts


def run(s0=10, p=0.5, r=2.0, min_k=1_000_000, update="averaged"):
    pts = paper_points()
    n = len(pts)
    Z = [(y * x[0], y * x[1]) for x, y in pts]
    eps0 = (math.log(s0) - math.log(s0 - 1)) / math.log(s0)
    alpha = min((r - 2 * p) / (2 * (1 + eps0)), 1 - p)
    C = max(4.0, 0.5 * s0**p * (s0 - 1) ** alpha)
    w = (0.0, 0.0)
    k = 0
    first = None
    s = 0
    while k < min_k:
        lam = (s0 + s) ** (-p)
        t = round((s0 + s) ** r)
        eta = C * (s0 + s - 1) ** (-alpha) / math.sqrt(t)
        cur = w
        acc0 = acc1 = 0.0
        best, best_val = cur, math.inf
        for _ in range(t):
            g0 = g1 = 0.0
            for z in Z:
                if z[0] * cur[0] + z[1] * cur[1] <= 1.0:
                    g0 += z[0]
                    g1 += z[1]
            cur = ((1 - lam * eta) * cur[0] + eta / n * g0, (1 - lam * eta) * cur[1] + eta / n * g1)
            acc0 += cur[0]
            acc1 += cur[1]
            val = 0.5 * lam * (cur[0] ** 2 + cur[1] ** 2) + sum(
                max(0.0, 1.0 - (z[0] * cur[0] + z[1] * cur[1])) for z in Z) / n
            if val < best_val:
                best, best_val = cur, val
        w = (acc0 / t, acc1 / t) if update == "averaged" else best
        k += t
        s += 1
        err = math.hypot(w[0] - 0.5, w[1] - 0.5)
        if first is None:
            first = err
    return s, k, first, err


if __name__ == "__main__":
    for rule in ("averaged", "best_iterate"):
        print(rule, "stages=%d k=%d first=%.17g final=%.17g" % run(update=rule))
