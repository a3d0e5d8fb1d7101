"""Hot loops: the fixed-lambda hinge subgradient run and logistic gradient descent.

Each kernel exists twice, a numba ``@njit`` version and a plain numpy
version with the same arithmetic order. The numba path is used when numba
imports and ``HOMSVM_DISABLE_NUMBA`` is unset (or "0"); set it to "1" to
force the numpy path.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

_disabled = os.environ.get("HOMSVM_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")
USE_NUMBA = HAVE_NUMBA and not _disabled
BACKEND = "numba" if USE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# numpy reference path

def hinge_inner_numpy(Z, w0, lam, eta, t, normalized, strict, record):
    n, d = Z.shape
    w = w0.copy()
    acc = np.zeros(d)
    best = w0.copy()
    best_val = np.inf
    max_norm = 0.0
    path = np.empty((t if record else 0, d))
    a = 1.0 - lam * eta
    b = eta / n
    m = (Z * w).sum(axis=1)
    for i in range(t):
        act = m < 1.0 if strict else m <= 1.0
        s = Z[act].sum(axis=0) if act.any() else np.zeros(d)
        if normalized:
            g = lam * w - s / n
            gn = math.sqrt((g * g).sum())
            if gn > 0.0:
                w = w - eta * (g / gn)
        else:
            w = a * w + b * s
        m = (Z * w).sum(axis=1)
        ww = (w * w).sum()
        val = 0.5 * lam * ww + np.maximum(0.0, 1.0 - m).sum() / n
        if val < best_val:
            best_val = val
            best = w.copy()
        acc += w
        nrm = math.sqrt(ww)
        if nrm > max_norm:
            max_norm = nrm
        if record:
            path[i] = w
    return acc / t, best, w, best_val, max_norm, path


def logistic_gd_numpy(Z, w0, eta, checkpoints):
    n, d = Z.shape
    w = w0.copy()
    out = np.empty((checkpoints.shape[0], d))
    c = 0
    total = int(checkpoints[-1]) if checkpoints.shape[0] else 0
    for i in range(1, total + 1):
        m = (Z * w).sum(axis=1)
        sig = np.where(m >= 0, np.exp(-np.abs(m)) / (1.0 + np.exp(-np.abs(m))), 1.0 / (1.0 + np.exp(-np.abs(m))))
        grad = -(sig[:, None] * Z).sum(axis=0) / n
        w = w - eta * grad
        while c < checkpoints.shape[0] and checkpoints[c] == i:
            out[c] = w
            c += 1
    return out


# --------------------------------------------------------------------------
# numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def hinge_inner_numba(Z, w0, lam, eta, t, normalized, strict, record):
        n, d = Z.shape
        w = w0.copy()
        acc = np.zeros(d)
        best = w0.copy()
        best_val = np.inf
        max_norm = 0.0
        path = np.empty((t if record else 0, d))
        a = 1.0 - lam * eta
        b = eta / n
        m = np.empty(n)
        s = np.empty(d)
        g = np.empty(d)
        for j in range(n):
            mj = 0.0
            for k in range(d):
                mj += Z[j, k] * w[k]
            m[j] = mj
        for i in range(t):
            s[:] = 0.0
            for j in range(n):
                if (m[j] < 1.0) if strict else (m[j] <= 1.0):
                    for k in range(d):
                        s[k] += Z[j, k]
            if normalized:
                gg = 0.0
                for k in range(d):
                    g[k] = lam * w[k] - s[k] / n
                    gg += g[k] * g[k]
                gn = math.sqrt(gg)
                if gn > 0.0:
                    for k in range(d):
                        w[k] = w[k] - eta * (g[k] / gn)
            else:
                for k in range(d):
                    w[k] = a * w[k] + b * s[k]
            hsum = 0.0
            for j in range(n):
                mj = 0.0
                for k in range(d):
                    mj += Z[j, k] * w[k]
                m[j] = mj
                if mj < 1.0:
                    hsum += 1.0 - mj
            ww = 0.0
            for k in range(d):
                ww += w[k] * w[k]
            val = 0.5 * lam * ww + hsum / n
            if val < best_val:
                best_val = val
                best[:] = w
            for k in range(d):
                acc[k] += w[k]
            nrm = math.sqrt(ww)
            if nrm > max_norm:
                max_norm = nrm
            if record:
                path[i] = w
        return acc / t, best, w, best_val, max_norm, path

    @njit(cache=True)
    def logistic_gd_numba(Z, w0, eta, checkpoints):
        n, d = Z.shape
        w = w0.copy()
        out = np.empty((checkpoints.shape[0], d))
        grad = np.empty(d)
        c = 0
        total = checkpoints[-1] if checkpoints.shape[0] else 0
        for i in range(1, total + 1):
            grad[:] = 0.0
            for j in range(n):
                mj = 0.0
                for k in range(d):
                    mj += Z[j, k] * w[k]
                e = math.exp(-abs(mj))
                sig = e / (1.0 + e) if mj >= 0 else 1.0 / (1.0 + e)
                for k in range(d):
                    grad[k] += sig * Z[j, k]
            for k in range(d):
                w[k] = w[k] - eta * (-grad[k] / n)
            while c < checkpoints.shape[0] and checkpoints[c] == i:
                out[c] = w
                c += 1
        return out

else:  # pragma: no cover
    hinge_inner_numba = None
    logistic_gd_numba = None


if USE_NUMBA:
    hinge_inner = hinge_inner_numba
    logistic_gd_kernel = logistic_gd_numba
else:
    hinge_inner = hinge_inner_numpy
    logistic_gd_kernel = logistic_gd_numpy
