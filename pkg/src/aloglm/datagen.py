"""Synthetic-experiment protocol: correlated Gaussian designs, sparse truths,
per-family responses, and the analytic out-of-sample risk for linear models.

Design rows are i.i.d. N(0, S) with S one of
  iid       identity;
  spiked    constant off-diagonal correlation rho (rank-one plus diagonal,
            sampled in O(np) without forming S);
  toeplitz  rho^|j - j'| (sampled as a stationary AR(1) scan, also O(np)).
When ``scale_to_unit_signal`` is on, S is divided by b*' S b* so the signal
variance var(x' b*) equals 1 regardless of dimension; the quadratic form is
computed analytically from the structure, never by Monte Carlo.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidConfig,
    InvalidCorrelation,
    UnsupportedFamily,
)
from .families import LossFamily

_STRUCTURES = ("iid", "spiked", "toeplitz")


@dataclass(frozen=True)
class DesignSpec:
    n: int
    p: int
    structure: str = "iid"
    rho: float = 0.0
    scale_to_unit_signal: bool = True

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise InvalidConfig("n and p must be positive")
        if self.structure not in _STRUCTURES:
            raise InvalidConfig(f"unknown design structure {self.structure!r}")
        if self.structure == "spiked" and not 0.0 <= self.rho < 1.0:
            raise InvalidCorrelation("spiked correlation must be in [0, 1)")
        if self.structure == "toeplitz" and not 0.0 < self.rho < 1.0:
            raise InvalidCorrelation("toeplitz correlation must be in (0, 1)")


@dataclass(frozen=True)
class TruthSpec:
    k: int
    value_law: str = "laplace"  # "laplace" (zero mean, unit variance) or "fixed:<v>"
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise InvalidConfig("k must be positive")
        if self.value_law != "laplace" and not self.value_law.startswith("fixed:"):
            raise InvalidConfig(f"unknown value law {self.value_law!r}")


@dataclass(frozen=True)
class Covariance:
    """Structured row covariance with its unit-signal scale factor."""

    structure: str
    rho: float
    p: int
    scale: float = 1.0  # dense() returns (base correlation matrix) / scale

    def base_quad_form(self, v: np.ndarray) -> float:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.p,):
            raise DimensionMismatch(f"vector length {v.shape} vs p {self.p}")
        if self.structure == "iid":
            return float(v @ v)
        if self.structure == "spiked":
            s = float(np.sum(v))
            return float((1.0 - self.rho) * (v @ v) + self.rho * s * s)
        nz = np.flatnonzero(v)
        total = 0.0
        for a in nz:
            total += float(v[a] * np.sum(v[nz] * self.rho ** np.abs(nz - a)))
        return total

    def quad_form(self, v: np.ndarray) -> float:
        return self.base_quad_form(v) / self.scale

    def dense(self) -> np.ndarray:
        if self.structure == "iid":
            S = np.eye(self.p)
        elif self.structure == "spiked":
            S = np.full((self.p, self.p), self.rho)
            np.fill_diagonal(S, 1.0)
        else:
            idx = np.arange(self.p)
            S = self.rho ** np.abs(idx[:, None] - idx[None, :])
        return S / self.scale


def covariance(spec: DesignSpec, beta_star: np.ndarray | None = None) -> Covariance:
    """Scaled covariance for a design spec (needs beta_star when scaling is on)."""
    cov = Covariance(spec.structure, spec.rho, spec.p)
    if spec.scale_to_unit_signal:
        if beta_star is None:
            raise InvalidConfig("unit-signal scaling needs the true coefficient vector")
        cov = Covariance(spec.structure, spec.rho, spec.p, scale=cov.base_quad_form(beta_star))
    if spec.structure != "iid" and spec.p <= 500:
        w = np.linalg.eigvalsh(cov.dense())
        if w[0] <= 0:
            raise InvalidCorrelation(f"covariance not PD (min eig {w[0]:.3e})")
    return cov


def gen_beta(spec: TruthSpec, p: int) -> np.ndarray:
    """Sparse truth: k nonzeros at uniform positions, values per the law."""
    if spec.k > p:
        raise InvalidConfig(f"k={spec.k} exceeds p={p}")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    pos = rng.choice(p, size=spec.k, replace=False)
    beta = np.zeros(p)
    if spec.value_law == "laplace":
        # scale 1/sqrt(2) makes the variance exactly 1
        beta[pos] = rng.laplace(0.0, 1.0 / np.sqrt(2.0), size=spec.k)
    else:
        beta[pos] = float(spec.value_law.split(":", 1)[1])
    return beta


def gen_design(spec: DesignSpec, beta_star: np.ndarray | None, seed: int) -> np.ndarray:
    """n rows i.i.d. from the (optionally unit-signal scaled) covariance."""
    cov = covariance(spec, beta_star)
    rng = np.random.Generator(np.random.PCG64(seed))
    Z = rng.standard_normal((spec.n, spec.p))
    if spec.structure == "iid":
        X = Z
    elif spec.structure == "spiked":
        g = rng.standard_normal((spec.n, 1))
        X = np.sqrt(1.0 - spec.rho) * Z + np.sqrt(spec.rho) * g
    else:
        X = np.empty_like(Z)
        X[:, 0] = Z[:, 0]
        c = np.sqrt(1.0 - spec.rho * spec.rho)
        for j in range(1, spec.p):
            X[:, j] = spec.rho * X[:, j - 1] + c * Z[:, j]
    return X / np.sqrt(cov.scale)


def gen_response(
    fam: LossFamily, X: np.ndarray, beta_star: np.ndarray, sigma: float, seed: int
) -> np.ndarray:
    """Sample y per family; sigma is used by the Gaussian family only."""
    z = X @ beta_star
    rng = np.random.Generator(np.random.PCG64(seed))
    if fam.tag == "gaussian":
        return z + sigma * rng.standard_normal(z.shape[0])
    if fam.tag == "logistic":
        prob = 1.0 / (1.0 + np.exp(-z))
        return (rng.random(z.shape[0]) < prob).astype(float)
    if fam.is_poisson:
        return rng.poisson(fam.rate(z)).astype(float)
    raise UnsupportedFamily(f"no response sampler for {fam.tag}")


def oracle_linear_risk(sigma_scaled, beta_hat, beta_star, sigma: float) -> float:
    """sigma^2 + (b - b*)' S (b - b*) for the linear model with row covariance S.

    Accepts either a dense covariance matrix or a Covariance object.
    """
    d = np.asarray(beta_hat, dtype=float) - np.asarray(beta_star, dtype=float)
    if isinstance(sigma_scaled, Covariance):
        if d.shape != (sigma_scaled.p,):
            raise DimensionMismatch(f"coefficient length {d.shape} vs p {sigma_scaled.p}")
        return float(sigma**2 + sigma_scaled.quad_form(d))
    S = np.asarray(sigma_scaled, dtype=float)
    if S.shape != (d.shape[0], d.shape[0]):
        raise DimensionMismatch(f"covariance {S.shape} vs coefficient length {d.shape}")
    return float(sigma**2 + d @ S @ d)
