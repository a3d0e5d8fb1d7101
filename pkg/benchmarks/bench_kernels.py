"""Time the numba and numpy kernels on the same workload and report the speedup.

    python benchmarks/bench_kernels.py --updates 200000

Numba compile time is paid once in a warm-up call and not counted.
"""

import argparse
import timeit

import numpy as np

from homsvm import _kernels as K
from homsvm.dataset import paper_dataset, random_separable
from homsvm.losses import LossContext


def workloads(updates):
    for name, ds in (("paper16", paper_dataset()), ("random n=200 d=5", random_separable(7, 200, 5))):
        Z = np.ascontiguousarray(LossContext(ds).signed)
        yield name, "hinge", Z, lambda k, Z=Z: k(Z, np.zeros(Z.shape[1]), 0.05, 0.1, updates, False, False, False)
        ck = np.array([updates], dtype=np.int64)
        yield name, "logistic", Z, lambda k, Z=Z, ck=ck: k(Z, np.zeros(Z.shape[1]), 0.1, ck)


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--updates", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA or K.hinge_inner_numba is None:
        print("numba is not available; nothing to compare")
        return 1
    kernels = {
        "hinge": (K.hinge_inner_numpy, K.hinge_inner_numba),
        "logistic": (K.logistic_gd_numpy, K.logistic_gd_numba),
    }
    print(f"updates={args.updates} repeat={args.repeat}")
    print(f"{'workload':<18} {'kernel':<9} {'numpy_s':>10} {'numba_s':>10} {'speedup':>9} {'max_abs_diff':>13}")
    for name, kind, _, call in workloads(args.updates):
        k_np, k_nb = kernels[kind]
        call(k_nb)  # compile
        t_np = best_time(lambda: call(k_np), args.repeat)
        t_nb = best_time(lambda: call(k_nb), args.repeat)
        a, b = call(k_np), call(k_nb)
        diff = max(float(np.max(np.abs(x - y))) for x, y in zip(a, b) if np.ndim(x) > 0 and np.size(x))
        print(f"{name:<18} {kind:<9} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}x {diff:>13.2g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
