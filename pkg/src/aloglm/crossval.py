"""Exact leave-one-out and K-fold cross-validation baselines.

Leave-one-out refits all n row-deleted problems to the full fit tolerance
(no loosening: LO is the ground truth the fast estimates are judged against),
warm-starting every refit from the full-data solution.  K-fold uses a
deterministic shuffled partition from a seeded PCG64 generator: fold j holds
positions j, j+K, j+2K, ... of the shuffled index order, so K = n reproduces
leave-one-out exactly.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .alo import check_metric, metric_values
from .data import Dataset
from .errors import InvalidConfig
from .families import LossFamily
from .penalties import Penalty
from .solver import FitConfig, FitResult, fit


@dataclass
class CvReport:
    lam: float
    estimate: float
    std_error: float
    per_unit: np.ndarray
    wall_time_ms: float
    n_not_converged: int = 0
    degraded: bool = field(init=False)

    def __post_init__(self):
        self.degraded = self.n_not_converged > 0


def _fold_partition(n: int, K: int, seed: int) -> list[np.ndarray]:
    rng = np.random.Generator(np.random.PCG64(seed))
    order = rng.permutation(n)
    return [np.sort(order[j::K]) for j in range(K)]


def lo_exact(
    ds: Dataset,
    fam: LossFamily,
    pen: Penalty,
    lam: float,
    cfg: FitConfig | None = None,
    metric: str = "squared_error",
    fitres: FitResult | None = None,
) -> CvReport:
    """Exact leave-one-out: n warm-started full refits."""
    check_metric(fam, metric)
    if ds.n < 2:
        raise InvalidConfig("leave-one-out needs n >= 2")
    cfg = cfg or FitConfig()
    t0 = time.perf_counter()
    if fitres is None:
        fitres = fit(ds, fam, pen, lam, cfg)
    warm = fitres.beta_hat
    phi = np.empty(ds.n)
    bad = 0
    for i in range(ds.n):
        sub = fit(ds.drop_rows(i), fam, pen, lam, cfg, warm=warm)
        if not sub.converged:
            bad += 1
        z_i = float(ds.X[i] @ sub.beta_hat)
        phi[i] = metric_values(fam, metric, ds.y[i : i + 1], np.array([z_i]))[0]
    ms = (time.perf_counter() - t0) * 1e3
    est = float(np.mean(phi))
    se = float(np.std(phi, ddof=1) / np.sqrt(ds.n)) if ds.n > 1 else 0.0
    return CvReport(float(lam), est, se, phi, ms, n_not_converged=bad)


def kfold(
    ds: Dataset,
    fam: LossFamily,
    pen: Penalty,
    lam: float,
    cfg: FitConfig | None = None,
    metric: str = "squared_error",
    K: int = 10,
    seed: int = 0,
    fitres: FitResult | None = None,
) -> CvReport:
    """K-fold cross-validation with a seed-deterministic partition.

    The estimate is the mean of phi over all held-out observations; the
    standard error is the sample SD of the fold means divided by sqrt(K).
    """
    check_metric(fam, metric)
    if not 2 <= K <= ds.n:
        raise InvalidConfig(f"fold count {K} must satisfy 2 <= K <= n={ds.n}")
    cfg = cfg or FitConfig()
    t0 = time.perf_counter()
    if fitres is None:
        fitres = fit(ds, fam, pen, lam, cfg)
    warm = fitres.beta_hat
    folds = _fold_partition(ds.n, K, seed)
    phi_all = np.empty(ds.n)
    fold_means = np.empty(K)
    bad = 0
    for j, idx in enumerate(folds):
        sub = fit(ds.drop_rows(idx), fam, pen, lam, cfg, warm=warm)
        if not sub.converged:
            bad += 1
        z_fold = ds.X[idx] @ sub.beta_hat
        vals = metric_values(fam, metric, ds.y[idx], z_fold)
        phi_all[idx] = vals
        fold_means[j] = float(np.mean(vals))
    ms = (time.perf_counter() - t0) * 1e3
    est = float(np.mean(phi_all))
    se = float(np.std(fold_means, ddof=1) / np.sqrt(K)) if K > 1 else 0.0
    return CvReport(float(lam), est, se, fold_means, ms, n_not_converged=bad)
