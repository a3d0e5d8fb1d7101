"""Invariant suite: oracle agreement, norm/minimizer/radius bounds, gap identities, bound dominance.

Each check returns a :class:`CheckResult` whose ``slack`` is the smallest
``bound - value`` seen (negative means violated).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from homsvm.losses import LossContext, iterate_norm_bound
from homsvm.metrics import BoundContext, angle_gap, l2_error, margin_gap, theorem_bound
from homsvm.oracle import estimate_lambda_prime, exact_hard_margin, exact_regularized
from homsvm.schedule import make_plan, radius, stage
from homsvm.solver import SolverConfig, estimate_bias, homotopic_solve


@dataclass
class CheckResult:
    name: str
    passed: bool
    slack: float
    count: int
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name:<22} checks={self.count:<6} worst_slack={self.slack:.6g} {self.detail}".rstrip()


def _result(name, slacks, tol=0.0, detail=""):
    slacks = np.asarray(slacks, dtype=np.float64)
    worst = float(slacks.min()) if slacks.size else math.inf
    return CheckResult(name, bool(worst >= -tol), worst, int(slacks.size), detail)


def lambda_grid(start=0.05, stop=4.0, step=0.05):
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def check_hard_margin(ctx: LossContext, w_star, tol=1e-9):
    """Supplied w* must match the oracle's and be feasible."""
    oracle = exact_hard_margin(ctx.dataset)
    feas = ctx.margins(w_star).min() - 1.0
    dist = l2_error(w_star, oracle.w)
    return _result("hard_margin", [feas, -dist], tol, f"oracle_w={np.array2string(oracle.w, precision=10)}")


def check_lambda_prime(ctx, w_star, lam_prime):
    w = exact_regularized(ctx.dataset, 0.99 * lam_prime).w
    return _result("lambda_prime_flat", [-l2_error(w, w_star)], 1e-9, f"lambda_prime={lam_prime:.6g}")


def check_minimizer_norms(ctx, grid, minimizers):
    slacks = [iterate_norm_bound(ctx, lam) - np.linalg.norm(minimizers[lam]) for lam in grid]
    return _result("norm_bound_minimizers", slacks, 1e-12)


def check_path_lipschitz(ctx, grid, minimizers, tol=1e-9):
    L = ctx.lipschitz_L
    slacks = [L / 2 * abs(1 / a - 1 / b) - l2_error(minimizers[a], minimizers[b])
              for a, b in itertools.combinations(grid, 2)]
    return _result("path_lipschitz", slacks, tol)


def check_path_to_hard_margin(ctx, grid, minimizers, w_star, lam_prime, tol=1e-9):
    L = ctx.lipschitz_L
    slacks = [L * lam / (2 * lam_prime**2) - l2_error(minimizers[lam], w_star) for lam in grid]
    return _result("path_to_hard_margin", slacks, tol)


def check_iterate_norms(ctx, traces):
    """Every inner iterate of every stage stays within B_lambda_s."""
    slacks = []
    for tr in traces:
        for c in tr.checkpoints:
            slacks.append(iterate_norm_bound(ctx, c.lam) - c.max_inner_norm)
    return _result("norm_bound_iterates", slacks, 1e-12)


def stage_seeds(trace, d):
    seeds = [np.zeros(d)]
    seeds += [c.z for c in trace.checkpoints[:-1]]
    return seeds


def check_radii(ctx, plan, trace, minimizer):
    """Seed of stage s lies within R_s of the stage-s regularized minimizer."""
    slacks = []
    for c, seed in zip(trace.checkpoints, stage_seeds(trace, ctx.d)):
        slacks.append(radius(plan, c.stage, ctx.lipschitz_L) - l2_error(seed, minimizer(c.lam)))
    return _result("stage_radius", slacks, 0.0)


def check_stage_average(ctx, plan, trace, minimizer):
    """|avg_s - w*_lambda_s|^2 <= 2 R_s L / (lambda_s sqrt(t_s)) for the averaged stage output."""
    L = ctx.lipschitz_L
    slacks = []
    for c in trace.checkpoints:
        bound = 2 * radius(plan, c.stage, L) * L / (c.lam * math.sqrt(c.t))
        slacks.append(bound - l2_error(c.z, minimizer(c.lam)) ** 2)
    return _result("stage_average", slacks, 0.0)


def check_bound_dominance(ctx, plans_traces, w_star, lam_prime):
    slacks = []
    for plan, tr in plans_traces:
        b = BoundContext(ctx.lipschitz_L, lam_prime, plan)
        slacks += [theorem_bound(b, c.k) - l2_error(c.z, w_star) for c in tr.checkpoints]
    return _result("bound_dominance", slacks, 0.0)


def check_gap_identities(ctx, w_star, samples=1000, seed=0):
    rng = np.random.default_rng(seed)
    W = w_star + rng.standard_normal((samples, ctx.d)) * rng.uniform(0.01, 2.0, (samples, 1))
    ident, angle_b, margin_b, margin_pos = [], [], [], []
    ns = np.linalg.norm(w_star)
    for w in W:
        nw = np.linalg.norm(w)
        if nw == 0:
            continue
        ag = angle_gap(w, w_star)
        ident.append(-abs(np.sum((w / nw - w_star / ns) ** 2) - 2 * ag))
        angle_b.append(l2_error(w, w_star) ** 2 / (2 * nw * ns) - ag)
        mg = margin_gap(ctx, w, w_star)
        margin_b.append(ctx.max_norm * math.sqrt(max(2 * ag, 0.0)) - mg)
        margin_pos.append(mg)
    return [
        _result("gap_unit_identity", ident, 1e-12),
        _result("gap_angle_bound", angle_b, 1e-12),
        _result("gap_margin_bound", margin_b, 1e-12),
        _result("gap_margin_nonneg", margin_pos, 1e-12),
    ]


def check_bias(ctx, w_star, b_star=0.0, samples=100, seed=1):
    rng = np.random.default_rng(seed)
    slacks = []
    for _ in range(samples):
        w = w_star + 0.1 * rng.standard_normal(ctx.d)
        slacks.append(ctx.max_norm * l2_error(w, w_star) - abs(estimate_bias(ctx, w) - b_star))
    return _result("bias_bound", slacks, 1e-12)


@dataclass
class Report:
    results: list = field(default_factory=list)
    lambda_prime: float = float("nan")
    w_star: np.ndarray | None = None

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def lines(self):
        yield f"# lambda_prime={self.lambda_prime:.17g}"
        yield "# w_star=" + ",".join(f"{v:.17g}" for v in self.w_star)
        for r in self.results:
            yield r.line()
        yield "ALL PASS" if self.passed else "FAILED: " + ", ".join(r.name for r in self.results if not r.passed)


def run_suite(dataset, grid=None, s0_values=(10,), budget=100_000, p=0.5, r=2.0,
              w_star=None, lam_tol=1e-4) -> Report:
    ctx = LossContext(dataset)
    oracle_w = exact_hard_margin(dataset).w
    w_star = oracle_w if w_star is None else np.asarray(w_star, dtype=np.float64)
    grid = lambda_grid() if grid is None else list(grid)
    report = Report(w_star=w_star)
    report.results.append(check_hard_margin(ctx, w_star))
    lam_prime = estimate_lambda_prime(dataset, tol=lam_tol, w_star=oracle_w)
    report.lambda_prime = lam_prime
    report.results.append(check_lambda_prime(ctx, w_star, lam_prime))

    cache = {}

    def minimizer(lam):
        if lam not in cache:
            cache[lam] = exact_regularized(dataset, lam).w
        return cache[lam]

    minimizers = {lam: minimizer(lam) for lam in grid}
    report.results.append(check_minimizer_norms(ctx, grid, minimizers))
    report.results.append(check_path_lipschitz(ctx, grid, minimizers))
    report.results.append(check_path_to_hard_margin(ctx, grid, minimizers, w_star, lam_prime))

    runs = []
    for s0 in s0_values:
        plan = make_plan(p, r, s0)
        if budget < stage(plan, 0).t_s:
            continue
        runs.append((plan, homotopic_solve(ctx, SolverConfig(plan, budget=budget))))
    report.results.append(check_iterate_norms(ctx, [tr for _, tr in runs]))
    radius_res = [check_radii(ctx, pl, tr, minimizer) for pl, tr in runs]
    avg_res = [check_stage_average(ctx, pl, tr, minimizer) for pl, tr in runs]
    report.results.append(_merge("stage_radius", radius_res))
    report.results.append(_merge("stage_average", avg_res))
    report.results.append(check_bound_dominance(ctx, runs, w_star, lam_prime))
    report.results.extend(check_gap_identities(ctx, w_star))
    return report


def _merge(name, results):
    if not results:
        return CheckResult(name, True, math.inf, 0)
    worst = min(r.slack for r in results)
    return CheckResult(name, all(r.passed for r in results), worst, sum(r.count for r in results))
