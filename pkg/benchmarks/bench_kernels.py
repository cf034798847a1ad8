"""Numba vs numpy timings for the hot kernels.

    python benchmarks/bench_kernels.py [--repeat 20] [--reconstruct]

Kernel rows call both flavours directly in one process. ``--reconstruct``
also times one 5% face reconstruction end to end in two subprocesses, one
with ``CSFACE_NO_NUMBA=1``.
"""
import argparse
import importlib
import os
import subprocess
import sys
import time

import numpy as np

from csface import _accel
from csface import svm, tv

hog_mod = importlib.import_module("csface.hog")  # the package re-exports hog() under this name


def best_of(fn, repeat):
    fn()  # warm-up (and JIT compile)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(rng):
    x = rng.uniform(0, 1, (112, 92))
    grad = np.empty_like(x)
    yield ("smoothed TV + gradient 112x92",
           lambda: tv._smoothed_tv_numpy(x, 1e-2, grad),
           lambda: tv._smoothed_tv_numba(x, 1e-2, grad))

    mag = rng.uniform(0, 100, (112, 92))
    ang = rng.uniform(0, 180, (112, 92))
    yield ("HOG cell histograms 112x92",
           lambda: hog_mod._cell_histograms_numpy(mag, ang, 14, 11, 8, 9, 180.0),
           lambda: hog_mod._cell_histograms_numba(mag, ang, 14, 11, 8, 9, 180.0))

    X = np.hstack([rng.normal(size=(16, 4680)), np.ones((16, 1))])
    y = np.r_[np.ones(8), -np.ones(8)]
    order = np.stack([rng.permutation(16) for _ in range(50)]).astype(np.int64)
    yield ("DCD pair, 16 x 4681, 50 epochs",
           lambda: svm._dcd_loop(X, y, 1.0, order, 0.0),
           lambda: svm._dcd_numba(X, y, 1.0, order, 0.0))


RECON = """
import time, numpy as np
from csface import _accel
from csface.experiment import degrade_and_reconstruct
from csface.tv import SolverConfig
img = np.random.default_rng(0).uniform(0, 255, (112, 92))
degrade_and_reconstruct(img, 5, 1, 3, SolverConfig(max_iters=5))
t0 = time.perf_counter()
res, _ = degrade_and_reconstruct(img, 5, 1, 3, SolverConfig(max_iters=200, tol=0))
print(_accel.backend(), time.perf_counter() - t0, res.evaluations)
"""


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--reconstruct", action="store_true")
    args = ap.parse_args()
    if not _accel.HAS_NUMBA:
        sys.exit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    print(f"{'kernel':36s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for name, slow, fast in kernel_cases(rng):
        a, b = best_of(slow, args.repeat), best_of(fast, args.repeat)
        print(f"{name:36s} {a * 1e3:10.3f} {b * 1e3:10.3f} {a / b:7.1f}x")

    if args.reconstruct:
        for flag in ("0", "1"):
            env = dict(os.environ, CSFACE_NO_NUMBA=flag)
            out = subprocess.run([sys.executable, "-c", RECON], env=env, capture_output=True,
                                 text=True, check=True).stdout.split()
            print(f"reconstruct 5%, 200 iterations [{out[0]}]: {float(out[1]):.3f} s ({out[2]} evaluations)")


if __name__ == "__main__":
    main()
