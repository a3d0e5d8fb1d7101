"""Stage schedule of the homotopic method: regularization, inner length and step size per stage.

For exponents ``0 < p < 1``, ``r > 2p`` and an offset ``s0 > 2``::

    eps0    = (log s0 - log(s0 - 1)) / log s0
    alpha   = min((r - 2p) / (2 (1 + eps0)), 1 - p)
    C       = max(4, (s0 - 1)**alpha / (2 lambda_0)),   lambda_0 = s0**-p
    lambda_s = (s0 + s)**-p
    t_s      = round((s0 + s)**r)          (half-to-even)
    eta_s    = C (s0 + s - 1)**-alpha / sqrt(t_s)
    R_s      = C L (s0 + s - 1)**-alpha
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class StageParams:
    s: int
    lambda_s: float
    t_s: int
    eta_s: float


@dataclass(frozen=True)
class SchedulePlan:
    p: float
    r: float
    s0: int
    epsilon0: float
    alpha: float
    big_c: float

    @property
    def lambda0(self):
        return self.s0 ** (-self.p)

    def stage(self, s: int) -> StageParams:
        return stage(self, s)

    def radius(self, s: int, L: float) -> float:
        return radius(self, s, L)


def make_plan(p: float, r: float, s0: int) -> SchedulePlan:
    if not 0 < p < 1:
        raise ScheduleError(f"p must lie in (0, 1), got {p}")
    if not r > 2 * p:
        raise ScheduleError(f"r must exceed 2p = {2 * p}, got {r}")
    if isinstance(s0, bool) or not float(s0).is_integer() or s0 <= 2:
        raise ScheduleError(f"s0 must be an integer > 2, got {s0}")
    s0 = int(s0)
    eps0 = (math.log(s0) - math.log(s0 - 1)) / math.log(s0)
    alpha = min((r - 2 * p) / (2 * (1 + eps0)), 1 - p)
    lam0 = s0 ** (-p)
    # 0.5 * s0**p * (s0-1)**alpha, written through lambda_0
    big_c = max(4.0, (s0 - 1) ** alpha / (2 * lam0))
    return SchedulePlan(float(p), float(r), s0, eps0, alpha, big_c)


def stage(plan: SchedulePlan, s: int) -> StageParams:
    if s < 0:
        raise ScheduleError(f"stage index must be >= 0, got {s}")
    base = plan.s0 + s
    t_s = max(1, round(base**plan.r))
    lam = base ** (-plan.p)
    eta = plan.big_c * (base - 1) ** (-plan.alpha) / math.sqrt(t_s)
    return StageParams(s, lam, int(t_s), eta)


def radius(plan: SchedulePlan, s: int, L: float) -> float:
    """Guaranteed distance from the stage-s seed to the stage-s regularized minimizer."""
    return plan.big_c * L * (plan.s0 + s - 1) ** (-plan.alpha)


def cumulative_updates(plan: SchedulePlan, S: int) -> int:
    return sum(stage(plan, s).t_s for s in range(S))


def budget_to_stages(plan: SchedulePlan, K: int) -> tuple[int, int]:
    """Largest stage count S whose total update count fits in K; returns (S, k)."""
    t0 = stage(plan, 0).t_s
    if K < t0:
        raise ScheduleError(f"budget {K} is smaller than the first stage ({t0} updates)")
    S, k = 0, 0
    while True:
        t = stage(plan, S).t_s
        if k + t > K:
            return S, k
        k += t
        S += 1
