"""Homotopic subgradient method for the hard-margin SVM, its variants and the logistic baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from homsvm import _kernels
from homsvm.losses import INCLUSIVE, STRICT, LossContext, logistic_loss, regularized_loss
from homsvm.schedule import SchedulePlan, budget_to_stages, stage

AVERAGED = "averaged"
BEST_ITERATE = "best_iterate"
PLAIN = "plain"
NORMALIZED = "normalized"


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    plan: SchedulePlan
    stages: int | None = None
    budget: int | None = None
    update_rule: str = AVERAGED
    step_mode: str = PLAIN
    active_rule: str = INCLUSIVE
    estimate_bias: bool = False
    checkpoint_every_stage: bool = True

    def __post_init__(self):
        if (self.stages is None) == (self.budget is None):
            raise SolverError("set exactly one of stages or budget")
        if self.stages is not None and self.stages < 1:
            raise SolverError(f"stages must be >= 1, got {self.stages}")
        if self.update_rule not in (AVERAGED, BEST_ITERATE):
            raise SolverError(f"unknown update_rule {self.update_rule!r}")
        if self.step_mode not in (PLAIN, NORMALIZED):
            raise SolverError(f"unknown step_mode {self.step_mode!r}")
        if self.active_rule not in (INCLUSIVE, STRICT):
            raise SolverError(f"unknown active_rule {self.active_rule!r}")

    def stage_count(self) -> int:
        if self.stages is not None:
            return self.stages
        return budget_to_stages(self.plan, self.budget)[0]


@dataclass(frozen=True)
class Checkpoint:
    stage: int
    k: int
    lam: float | None
    eta: float
    t: int | None
    z: np.ndarray
    loss: float
    bias: float | None = None
    # largest inner-iterate norm seen during this stage (hinge runs only)
    max_inner_norm: float | None = None


@dataclass
class SolveTrace:
    checkpoints: list[Checkpoint] = field(default_factory=list)
    final_w: np.ndarray | None = None

    @property
    def ks(self):
        return np.array([c.k for c in self.checkpoints], dtype=np.int64)

    @property
    def iterates(self):
        return np.array([c.z for c in self.checkpoints])


@dataclass(frozen=True)
class InnerResult:
    averaged: np.ndarray
    best: np.ndarray
    last: np.ndarray
    best_value: float
    max_norm: float
    path: np.ndarray


def inner_run(ctx: LossContext, w0, lam, eta, t, step_mode=PLAIN, active_rule=INCLUSIVE,
              record=False) -> InnerResult:
    """Run ``t`` subgradient steps on F_lam from ``w0`` with fixed step ``eta``.

    ``averaged`` is the mean of w_1..w_t (the seed is excluded), ``best`` the
    first iterate attaining the smallest F_lam, ``last`` is w_t. With
    ``record=True`` the full (t, d) path is returned as well.
    """
    if not lam > 0:
        raise SolverError(f"lambda must be positive, got {lam}")
    if not eta > 0:
        raise SolverError(f"step size must be positive, got {eta}")
    if not eta * lam < 1:
        raise SolverError(f"need eta * lambda < 1, got {eta * lam}")
    if t < 1:
        raise SolverError(f"need at least one update, got t={t}")
    if step_mode not in (PLAIN, NORMALIZED):
        raise SolverError(f"unknown step_mode {step_mode!r}")
    if active_rule not in (INCLUSIVE, STRICT):
        raise SolverError(f"unknown active_rule {active_rule!r}")
    w0 = np.array(ctx._vec(w0), dtype=np.float64)
    avg, best, last, best_val, max_norm, path = _kernels.hinge_inner(
        ctx.signed, w0, float(lam), float(eta), int(t),
        step_mode == NORMALIZED, active_rule == STRICT, bool(record),
    )
    return InnerResult(avg, best, last, float(best_val), float(max_norm), path)


def homotopic_solve(ctx: LossContext, config: SolverConfig) -> SolveTrace:
    S = config.stage_count()
    w = np.zeros(ctx.d)
    trace = SolveTrace()
    k = 0
    for s in range(S):
        sp = stage(config.plan, s)
        res = inner_run(ctx, w, sp.lambda_s, sp.eta_s, sp.t_s, config.step_mode, config.active_rule)
        w = res.averaged if config.update_rule == AVERAGED else res.best
        k += sp.t_s
        if config.checkpoint_every_stage or s == S - 1:
            bias = estimate_bias(ctx, w) if config.estimate_bias else None
            trace.checkpoints.append(Checkpoint(
                stage=s, k=k, lam=sp.lambda_s, eta=sp.eta_s, t=sp.t_s, z=w.copy(),
                loss=regularized_loss(ctx, w, sp.lambda_s), bias=bias,
                max_inner_norm=res.max_norm,
            ))
    trace.final_w = w.copy()
    return trace


def estimate_bias(ctx: LossContext, w) -> float:
    """Offset placing the hyperplane midway between the closest points of each class."""
    y = ctx.dataset.labels
    if not (np.any(y > 0) and np.any(y < 0)):
        raise SolverError("bias estimation needs both classes")
    proj = ctx.dataset.points @ ctx._vec(w)
    return float(-(proj[y > 0].min() + proj[y < 0].max()) / 2)


def sigma_max(ctx: LossContext, tol=1e-12, max_iter=10_000) -> float:
    """Largest singular value of the data matrix by power iteration on X^T X."""
    X = ctx.dataset.points
    if not np.any(X):
        raise SolverError("data matrix is zero")
    A = X.T @ X
    d = A.shape[0]
    starts = [np.ones(d), np.arange(1.0, d + 1.0)]
    best = 0.0
    for v in starts:
        v = v / np.linalg.norm(v)
        if not np.any(A @ v):
            # deterministic kick out of the null space
            v = v + np.cos(np.arange(d) + 1.0)
            v /= np.linalg.norm(v)
        est = 0.0
        for _ in range(max_iter):
            u = A @ v
            nu = np.linalg.norm(u)
            if nu == 0.0:
                break
            v = u / nu
            if abs(nu - est) <= tol * nu:
                est = nu
                break
            est = nu
        else:
            raise SolverError(f"power iteration did not converge in {max_iter} iterations")
        best = max(best, est)
    return math.sqrt(best)


def logistic_gd(ctx: LossContext, iterations: int, checkpoint_schedule=None, eta=None) -> SolveTrace:
    """Fixed-step gradient descent on the mean logistic loss from w = 0.

    The step defaults to 1 / sigma_max(X). Checkpoints are taken after the
    given cumulative update counts (default: only the last one).
    """
    if iterations < 1:
        raise SolverError(f"iterations must be >= 1, got {iterations}")
    if eta is None:
        eta = 1.0 / sigma_max(ctx)
    ks = [iterations] if checkpoint_schedule is None else sorted({int(k) for k in checkpoint_schedule})
    ks = [k for k in ks if 1 <= k <= iterations]
    if not ks or ks[-1] != iterations:
        ks.append(iterations)
    ks = np.array(ks, dtype=np.int64)
    Ws = _kernels.logistic_gd_kernel(ctx.signed, np.zeros(ctx.d), float(eta), ks)
    trace = SolveTrace()
    for i, (k, w) in enumerate(zip(ks, Ws)):
        trace.checkpoints.append(Checkpoint(
            stage=i, k=int(k), lam=None, eta=float(eta), t=None, z=w.copy(),
            loss=logistic_loss(ctx, w),
        ))
    trace.final_w = Ws[-1].copy()
    return trace
