"""Hinge loss, the regularized objective F_lambda, subgradients and the logistic baseline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from homsvm.dataset import Dataset

INCLUSIVE = "inclusive"
STRICT = "strict"


def _check_rule(active_rule):
    if active_rule not in (INCLUSIVE, STRICT):
        raise ValueError(f"active_rule must be 'inclusive' or 'strict', got {active_rule!r}")


@dataclass(frozen=True)
class LossContext:
    """A dataset plus the norm constants every bound needs.

    ``lipschitz_L = 2 * mean_norm`` bounds the Lipschitz constant of each
    F_lambda on the ball of radius ``iterate_norm_bound(lam)``.
    """

    dataset: Dataset
    signed: np.ndarray = field(init=False, repr=False)
    norms: np.ndarray = field(init=False, repr=False)
    mean_norm: float = field(init=False)
    lipschitz_L: float = field(init=False)

    def __post_init__(self):
        Z = np.ascontiguousarray(self.dataset.signed_points)
        Z.setflags(write=False)
        norms = np.linalg.norm(self.dataset.points, axis=1)
        mean_norm = float(norms.sum() / self.dataset.n)
        object.__setattr__(self, "signed", Z)
        object.__setattr__(self, "norms", norms)
        object.__setattr__(self, "mean_norm", mean_norm)
        object.__setattr__(self, "lipschitz_L", 2.0 * mean_norm)

    @property
    def n(self):
        return self.dataset.n

    @property
    def d(self):
        return self.dataset.d

    @property
    def max_norm(self):
        return float(self.norms.max())

    def margins(self, w):
        return self.signed @ self._vec(w)

    def _vec(self, w):
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.d,):
            raise ValueError(f"weight vector has shape {w.shape}, expected ({self.d},)")
        return w


def hinge(u):
    return np.maximum(0.0, 1.0 - u)


def empirical_hinge(ctx: LossContext, w) -> float:
    return float(hinge(ctx.margins(w)).mean())


def regularized_loss(ctx: LossContext, w, lam: float) -> float:
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    w = ctx._vec(w)
    return float(0.5 * lam * (w @ w) + empirical_hinge(ctx, w))


def active_set(ctx: LossContext, w, active_rule=INCLUSIVE) -> np.ndarray:
    _check_rule(active_rule)
    m = ctx.margins(w)
    return m <= 1.0 if active_rule == INCLUSIVE else m < 1.0


def subgradient(ctx: LossContext, w, lam: float, active_rule=INCLUSIVE) -> np.ndarray:
    """``lam * w - (1/n) * sum of y_j x_j`` over points with margin <= 1 (or < 1 when strict)."""
    if lam < 0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    w = ctx._vec(w)
    act = active_set(ctx, w, active_rule)
    return lam * w - ctx.signed[act].sum(axis=0) / ctx.n


def iterate_norm_bound(ctx: LossContext, lam: float) -> float:
    """Radius of the ball that traps subgradient iterates on F_lambda (started inside it)."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return ctx.mean_norm / lam


def logistic_loss(ctx: LossContext, w) -> float:
    # log(1 + exp(-m)) evaluated without overflow
    return float(np.logaddexp(0.0, -ctx.margins(w)).mean())


def _sigmoid_neg(m):
    # sigmoid(-m), stable for either sign
    out = np.empty_like(m)
    pos = m >= 0
    e = np.exp(-m[pos])
    out[pos] = e / (1.0 + e)
    e = np.exp(m[~pos])
    out[~pos] = 1.0 / (1.0 + e)
    return out


def logistic_gradient(ctx: LossContext, w) -> np.ndarray:
    m = ctx.margins(w)
    return -(_sigmoid_neg(m) @ ctx.signed) / ctx.n
