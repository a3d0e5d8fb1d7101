"""Exact ground truth for small problems by active-pattern enumeration.

Points with identical signed rows ``y_j x_j`` always share their margin, so
enumeration runs over the distinct rows and a row of multiplicity ``c``
carries a coefficient in ``[0, c]``.

Caps: hard margin n <= 24, regularized problem <= 16 distinct signed rows,
d <= 6 in both.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from homsvm.dataset import Dataset

HARD_MARGIN_MAX_N = 24
REGULARIZED_MAX_GROUPS = 16
MAX_D = 6

FEAS_TOL = 1e-10
DUAL_TOL = 1e-12
ACTIVE_TOL = 1e-9


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleSolution:
    w: np.ndarray
    active_set: tuple
    duals: np.ndarray
    lam: float | None
    residual: float


def _groups(dataset: Dataset):
    Z = dataset.signed_points
    uniq, inverse, counts = np.unique(Z, axis=0, return_inverse=True, return_counts=True)
    return Z, uniq, inverse.reshape(-1), counts.astype(np.float64)


def _batched_solve(G, rhs):
    """Solve the stacked systems G x = rhs, flagging (numerically) singular ones."""
    diag = np.prod(np.diagonal(G, axis1=-2, axis2=-1), axis=-1)
    det = np.linalg.det(G)
    ok = np.abs(det) > 1e-10 * np.abs(diag)
    x = np.full(rhs.shape, np.nan)
    if np.any(ok):
        x[ok] = np.linalg.solve(G[ok], rhs[ok][..., None])[..., 0]
    return x, ok


def exact_hard_margin(dataset: Dataset) -> OracleSolution:
    """Minimum-norm ``w`` with ``y_j x_j . w >= 1`` for all j (the hard-margin SVM)."""
    if dataset.n > HARD_MARGIN_MAX_N or dataset.d > MAX_D:
        raise OracleError(f"hard-margin oracle capped at n <= {HARD_MARGIN_MAX_N}, d <= {MAX_D}")
    Z, U, inverse, counts = _groups(dataset)
    nu, d = U.shape
    best_w, best_alpha, best_norm = None, None, np.inf
    for a in range(1, min(d, nu) + 1):
        combos = np.array(list(itertools.combinations(range(nu), a)))
        ZA = U[combos]                              # (m, a, d)
        G = ZA @ ZA.transpose(0, 2, 1)
        alpha, ok = _batched_solve(G, np.ones((len(combos), a)))
        W = np.einsum("ma,mad->md", np.nan_to_num(alpha), ZA)
        margins = W @ U.T
        good = ok & np.all(np.nan_to_num(alpha, nan=-1.0) >= -DUAL_TOL, axis=1) \
            & np.all(margins >= 1 - FEAS_TOL, axis=1)
        if not np.any(good):
            continue
        norms = np.linalg.norm(W, axis=1)
        norms[~good] = np.inf
        i = int(np.argmin(norms))
        if norms[i] < best_norm - 1e-14:
            best_norm = norms[i]
            best_w = W[i]
            best_alpha = np.zeros(nu)
            best_alpha[combos[i]] = alpha[i]
    if best_w is None:
        raise OracleError("no feasible hard-margin solution (data not linearly separable?)")

    # spread each group's dual evenly over its members
    duals = best_alpha[inverse] / counts[inverse]
    residual = float(np.linalg.norm(best_w - duals @ Z))
    if residual > 1e-9 * (1 + np.linalg.norm(best_w)):
        raise OracleError(f"stationarity residual too large ({residual:.3g})")
    active = tuple(int(j) for j in np.flatnonzero(np.abs(Z @ best_w - 1) <= ACTIVE_TOL))
    return OracleSolution(best_w.copy(), active, duals, None, residual)


def exact_regularized(dataset: Dataset, lam: float) -> OracleSolution:
    """Unique minimizer of ``lam/2 |w|^2 + mean hinge`` via inside/on/outside pattern enumeration.

    A pattern fixes which rows lie inside the margin (coefficient = multiplicity),
    on it (coefficient solved for, within [0, multiplicity]) or outside (0). The
    first pattern whose solution reproduces itself is returned.
    """
    if not lam > 0:
        raise OracleError(f"lambda must be positive, got {lam}")
    Z, U, inverse, counts = _groups(dataset)
    nu, d = U.shape
    if nu > REGULARIZED_MAX_GROUPS or d > MAX_D:
        raise OracleError(
            f"regularized oracle capped at {REGULARIZED_MAX_GROUPS} distinct rows and d <= {MAX_D}")
    n = dataset.n
    scale = lam * n
    CU = counts[:, None] * U

    for a in range(0, min(d, nu) + 1):
        for A in itertools.combinations(range(nu), a):
            A = list(A)
            rest = [j for j in range(nu) if j not in A]
            m = len(rest)
            masks = ((np.arange(2**m)[:, None] >> np.arange(m)[None, :]) & 1).astype(np.float64)
            S = masks @ CU[rest] if m else np.zeros((1, d))
            if a:
                ZA = U[A]
                G = ZA @ ZA.T
                sign, logdet = np.linalg.slogdet(G)
                if sign == 0 or np.exp(logdet) <= 1e-10 * np.prod(np.diag(G)):
                    continue
                beta = np.linalg.solve(G, (scale - S @ ZA.T).T).T      # (2^m, a)
                W = (S + beta @ ZA) / scale
                ok = np.all(beta >= -DUAL_TOL * counts[A], axis=1) \
                    & np.all(beta <= counts[A] * (1 + DUAL_TOL), axis=1)
            else:
                beta = np.zeros((S.shape[0], 0))
                W = S / scale
                ok = np.ones(S.shape[0], dtype=bool)
            if m:
                mr = W @ U[rest].T
                inside = masks.astype(bool)
                ok &= np.all(np.where(inside, mr <= 1 + FEAS_TOL, mr >= 1 - FEAS_TOL), axis=1)
            hits = np.flatnonzero(ok)
            if hits.size:
                i = int(hits[0])
                return _regularized_solution(dataset, Z, U, inverse, counts, lam, W[i],
                                             A, rest, masks[i] if m else np.zeros(0), beta[i])
    raise OracleError(f"no consistent active pattern at lambda={lam} (degenerate data?)")


def _regularized_solution(dataset, Z, U, inverse, counts, lam, w, A, rest, mask, beta):
    group_coef = np.zeros(U.shape[0])
    group_coef[rest] = mask * counts[rest]
    group_coef[A] = beta
    duals = group_coef[inverse] / counts[inverse]
    residual = float(np.linalg.norm(lam * w - duals @ Z / dataset.n))
    if residual > 1e-9 * (1 + np.linalg.norm(w)):
        raise OracleError(f"stationarity residual too large ({residual:.3g})")
    active = tuple(int(j) for j in np.flatnonzero(np.abs(Z @ w - 1) <= ACTIVE_TOL))
    return OracleSolution(w.copy(), active, duals, float(lam), residual)


def estimate_lambda_prime(dataset: Dataset, tol=1e-3, lambda_max=1e6, w_star=None) -> float:
    """Largest lambda (to within ``tol``) whose regularized minimizer equals the hard-margin one.

    Bisection on the predicate ``|w*_lam - w*| <= 1e-9``, which holds exactly on (0, lambda'].
    The returned value is the lower bracket end, so it always satisfies the predicate.
    """
    if not tol > 0:
        raise OracleError("tol must be positive")
    if w_star is None:
        w_star = exact_hard_margin(dataset).w

    def flat(lam):
        return np.linalg.norm(exact_regularized(dataset, lam).w - w_star) <= 1e-9

    lo, hi = None, 1.0
    if flat(hi):
        lo = hi
        while flat(hi):
            lo = hi
            hi *= 2.0
            if hi > lambda_max:
                raise OracleError(f"regularization path still flat at lambda_max={lambda_max}")
    else:
        lo = hi / 2
        while not flat(lo):
            hi = lo
            lo /= 2
            if lo < 1e-12:
                raise OracleError("no flat segment found above lambda=1e-12")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if flat(mid):
            lo = mid
        else:
            hi = mid
    return lo
