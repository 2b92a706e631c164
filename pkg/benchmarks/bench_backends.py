#!/usr/bin/env python3
"""Compare the numba-compiled kernels against the pure-numpy fallback.

Runs the same workloads in two subprocesses, one per backend (selected by the
ALOGLM_NUMBA environment variable), and prints a timing table.  Workloads:

  fista_lasso     warm lasso path, Gaussian loss (the solver inner loop)
  fista_logistic  logistic lasso fits
  prox_bridge     bridge proximal map on a large vector (scalar Newton)
  prox_sl1        smoothed-l1 proximal map on a large vector
  lo_refits       50 warm-started leave-one-out refits

Usage: python benchmarks/bench_backends.py [--quick]
"""

import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from aloglm import backend_name, Dataset, FitConfig, fit, fit_leave_one_out, gaussian, logistic, l1
from aloglm import _kernels as K

quick = sys.argv[1] == "1"
rng = np.random.default_rng(0)
n, p = (150, 300) if quick else (300, 600)
X = rng.standard_normal((n, p))
beta_t = np.zeros(p); beta_t[: n // 10] = rng.standard_normal(n // 10)
y = X @ beta_t + rng.standard_normal(n)
ds = Dataset(X, y, gaussian())
prob = 1 / (1 + np.exp(-(X @ beta_t)))
ds_log = Dataset(X, (rng.random(n) < prob).astype(float), logistic())
cfg = FitConfig(kkt_tol=1e-8)
lams = np.logspace(np.log10(np.abs(X.T @ y).max() * 0.5), 0, 10)

def timeit(fn, reps=3):
    fn()  # warm-up (includes JIT compilation when enabled)
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1e3

def lasso_path():
    warm = None
    for lam in lams:
        res = fit(ds, gaussian(), l1(), float(lam), cfg, warm=warm)
        warm = res.beta_hat

def logistic_path():
    warm = None
    for lam in np.logspace(0, -1, 5):
        res = fit(ds_log, logistic(), l1(), float(lam), cfg, warm=warm)
        warm = res.beta_hat

v = rng.standard_normal(200_000) * 2
def prox_bridge():
    K.prox_apply(K.PEN_BRIDGE, 1.5, v, 0.7)
def prox_sl1():
    K.prox_apply(K.PEN_SMOOTHED_L1, 100.0, v, 0.7)

full = fit(ds, gaussian(), l1(), float(lams[-1]), cfg)
def lo_refits():
    for i in range(50):
        fit_leave_one_out(ds, gaussian(), l1(), float(lams[-1]), cfg, i, warm=full.beta_hat)

out = {"backend": backend_name()}
out["fista_lasso"] = timeit(lasso_path)
out["fista_logistic"] = timeit(logistic_path)
out["prox_bridge"] = timeit(prox_bridge)
out["prox_sl1"] = timeit(prox_sl1)
out["lo_refits"] = timeit(lo_refits)
print(json.dumps(out))
"""


def run(numba_flag, quick):
    env = dict(os.environ, ALOGLM_NUMBA=numba_flag)
    t0 = time.time()
    res = subprocess.run(
        [sys.executable, "-c", WORKER, "1" if quick else "0"],
        env=env, capture_output=True, text=True,
    )
    if res.returncode != 0:
        sys.stderr.write(res.stderr)
        raise SystemExit(res.returncode)
    out = json.loads(res.stdout)
    out["total_s"] = time.time() - t0
    return out


def main():
    quick = "--quick" in sys.argv
    numpy_res = run("0", quick)
    numba_res = run("1", quick)
    names = [k for k in numpy_res if k not in ("backend", "total_s")]
    width = max(len(n) for n in names)
    print(f"{'workload':<{width}}  {'numpy (ms)':>12}  {'numba (ms)':>12}  {'speedup':>8}")
    for name in names:
        a, b = numpy_res[name], numba_res[name]
        print(f"{name:<{width}}  {a:>12.1f}  {b:>12.1f}  {a / b:>7.2f}x")
    print(f"\n(worker wall time incl. startup/compile: numpy {numpy_res['total_s']:.0f}s, "
          f"numba {numba_res['total_s']:.0f}s)")


if __name__ == "__main__":
    main()
