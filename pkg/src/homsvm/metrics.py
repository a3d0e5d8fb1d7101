"""Distance, angle and margin gaps to the hard-margin solution, the convergence bound, rate fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from homsvm.losses import LossContext
from homsvm.schedule import SchedulePlan


class MetricError(ValueError):
    pass


def _pair(w, w_star):
    w = np.asarray(w, dtype=np.float64)
    w_star = np.asarray(w_star, dtype=np.float64)
    if w.shape != w_star.shape:
        raise MetricError(f"dimension mismatch: {w.shape} vs {w_star.shape}")
    return w, w_star


def l2_error(w, w_star) -> float:
    w, w_star = _pair(w, w_star)
    return float(np.linalg.norm(w - w_star))


def angle_gap(w, w_star) -> float:
    """1 - cos(angle between w and w*); undefined (raises) for a zero vector."""
    w, w_star = _pair(w, w_star)
    nw, ns = np.linalg.norm(w), np.linalg.norm(w_star)
    if nw == 0 or ns == 0:
        raise MetricError("angle gap is undefined for a zero vector")
    # rounding can push the cosine a hair past +-1
    return float(min(max(1.0 - (w @ w_star) / (nw * ns), 0.0), 2.0))


def margin_gap(ctx: LossContext, w, w_star) -> float:
    """Optimal margin 1/|w*| minus the worst normalized margin achieved by w."""
    w, w_star = _pair(w, w_star)
    nw = np.linalg.norm(w)
    if nw == 0:
        raise MetricError("margin gap is undefined for a zero vector")
    return float(1.0 / np.linalg.norm(w_star) - (ctx.margins(w) / nw).min())


@dataclass(frozen=True)
class BoundContext:
    L: float
    lambda_prime: float
    plan: SchedulePlan

    @property
    def rate_c(self) -> float:
        p = self.plan
        return min(p.alpha * (1 - p.epsilon0) / (p.r + 1), p.p / (p.r + 1))

    @property
    def delta(self) -> float:
        return 1.0 / 6.0 - self.rate_c


def theorem_bound(bctx: BoundContext, k) -> float:
    """Two-term upper bound on |z_k - w*| after k total subgradient updates."""
    if k < 1:
        raise MetricError(f"k must be >= 1, got {k}")
    pl = bctx.plan
    base = (pl.r + 1) * k
    first = pl.big_c * bctx.L * base ** (-pl.alpha * (1 - pl.epsilon0) / (pl.r + 1))
    second = bctx.L / (2 * bctx.lambda_prime**2) * base ** (-pl.p / (pl.r + 1))
    return float(first + second)


def corollary_bound(L, lambda_prime, s0, k) -> float:
    """The same bound specialised to p = 1/2, r = 2."""
    eps0 = (math.log(s0) - math.log(s0 - 1)) / math.log(s0)
    alpha = 1 / (2 * (1 + eps0))
    big_c = max(4.0, 0.5 * math.sqrt(s0) * (s0 - 1) ** alpha)
    expo = (1 - eps0) / (6 * (1 + eps0))
    return big_c * L * (3 * k) ** (-expo) + L * (3 * k) ** (-1 / 6) / (2 * lambda_prime**2)


def fit_rate(trace, window=None) -> float:
    """Least-squares slope of log(value) against log(k) over the last ``window`` points."""
    pts = list(trace)
    if window is not None:
        pts = pts[-int(window):]
    if len(pts) < 3:
        raise MetricError("need at least 3 points to fit a rate")
    k = np.array([p[0] for p in pts], dtype=np.float64)
    v = np.array([p[1] for p in pts], dtype=np.float64)
    if np.any(v <= 0) or np.any(k <= 0):
        raise MetricError("rate fit needs positive k and values")
    slope, _ = np.polyfit(np.log(k), np.log(v), 1)
    return float(slope)


def trailing_decade(trace):
    """Points whose k lies within a factor 10 of the last k."""
    pts = list(trace)
    kmax = pts[-1][0]
    return [p for p in pts if p[0] * 10 >= kmax]
