"""Dense symmetric linear-algebra primitives with explicit path selection.

The hat-diagonal computations need the quadratic forms x_i' A^{-1} x_i for
A = diag(penalty curvature) + X' diag(loss curvature) X.  Three routes exist:

* ``DirectP``     factor the p-by-p matrix A directly;
* ``WoodburyN``   when every penalty-curvature entry is strictly positive,
                  route through an n-by-n inner system via the matrix
                  inversion lemma (preferred when n < p);
* ``ActiveSetS``  restrict to a supplied active set of columns.

All matrices are dense; no sparsity assumptions are made about X.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .errors import (
    DimensionMismatch,
    NotPositiveDefinite,
    SingularInnerMatrix,
)

JITTER_REL = 1e-10


@dataclass(frozen=True)
class SpdFactor:
    """Lower Cholesky factor of a symmetric positive-definite matrix."""

    dim: int
    lower: np.ndarray

    def solve(self, b: np.ndarray) -> np.ndarray:
        y = sla.solve_triangular(self.lower, b, lower=True, check_finite=False)
        return sla.solve_triangular(self.lower.T, y, lower=False, check_finite=False)

    def half_solve(self, b: np.ndarray) -> np.ndarray:
        """L^{-1} b, so that ||L^{-1} x||^2 = x' A^{-1} x."""
        return sla.solve_triangular(self.lower, b, lower=True, check_finite=False)


@dataclass(frozen=True)
class InversionPath:
    tag: str  # "DirectP" | "WoodburyN" | "ActiveSetS"
    rationale: str


def choose_path(n: int, p: int, min_curv: float, has_active_set: bool) -> InversionPath:
    """Default selection mirroring the O(min(p^3 + n p^2, n^3 + n^2 p)) trade-off."""
    if has_active_set:
        return InversionPath("ActiveSetS", "active set supplied; restrict columns")
    if n < p and min_curv > 0.0:
        return InversionPath("WoodburyN", f"n={n} < p={p} and penalty curvature positive")
    return InversionPath("DirectP", f"p={p} direct factorization")


def chol_factor(A: np.ndarray, jitter: bool = True) -> SpdFactor:
    """Cholesky with a single bounded jitter retry.

    On failure adds 1e-10 * max(diag) to the diagonal once; raises
    NotPositiveDefinite if the retry also fails.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got {A.shape}")
    try:
        L = sla.cholesky(A, lower=True, check_finite=False)
        return SpdFactor(A.shape[0], L)
    except sla.LinAlgError:
        if not jitter:
            raise NotPositiveDefinite("Cholesky failed")
    eps = JITTER_REL * max(float(np.max(np.diag(A))), 1e-300)
    try:
        L = sla.cholesky(A + eps * np.eye(A.shape[0]), lower=True, check_finite=False)
    except sla.LinAlgError:
        raise NotPositiveDefinite("Cholesky failed after jitter") from None
    return SpdFactor(A.shape[0], L)


def chol_solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve A X = B for symmetric positive-definite A."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if B.shape[0] != A.shape[0]:
        raise DimensionMismatch(f"A {A.shape} vs B {B.shape}")
    return chol_factor(A).solve(B)


def quad_form_diag(X: np.ndarray, factor: SpdFactor, w: np.ndarray) -> np.ndarray:
    """h_i = w_i * x_i' A^{-1} x_i from a prebuilt factor of A."""
    X = np.asarray(X, dtype=float)
    w = np.asarray(w, dtype=float)
    if X.ndim != 2 or X.shape[1] != factor.dim:
        raise DimensionMismatch(f"X {X.shape} vs factor dim {factor.dim}")
    if w.shape != (X.shape[0],):
        raise DimensionMismatch(f"w {w.shape} vs n {X.shape[0]}")
    T = factor.half_solve(X.T)
    return w * np.sum(T * T, axis=0)


def woodbury_quad_form_diag(
    X: np.ndarray, lambda_curv: np.ndarray, ell2: np.ndarray
) -> np.ndarray:
    """h_i = ell2_i * x_i' (Lam + X' diag(ell2) X)^{-1} x_i via the n-by-n identity.

    Lam = diag(lambda_curv) must be invertible (all entries strictly positive).
    With G = diag(sqrt(ell2)):
      X (X'G^2 X + Lam)^{-1} X' = M - M G (I + G M G)^{-1} G M,   M = X Lam^{-1} X'.
    """
    X = np.asarray(X, dtype=float)
    lambda_curv = np.asarray(lambda_curv, dtype=float)
    ell2 = np.asarray(ell2, dtype=float)
    n, p = X.shape
    if lambda_curv.shape != (p,):
        raise DimensionMismatch(f"lambda_curv {lambda_curv.shape} vs p {p}")
    if ell2.shape != (n,):
        raise DimensionMismatch(f"ell2 {ell2.shape} vs n {n}")
    if np.any(lambda_curv <= 0):
        raise SingularInnerMatrix("penalty curvature must be strictly positive")

    return ell2 * woodbury_raw_quad_diag(X, lambda_curv, ell2)


def woodbury_raw_quad_diag(
    X: np.ndarray, lambda_curv: np.ndarray, ell2: np.ndarray
) -> np.ndarray:
    """x_i' (Lam + X' diag(ell2) X)^{-1} x_i via the n-by-n inner system."""
    X = np.asarray(X, dtype=float)
    lambda_curv = np.asarray(lambda_curv, dtype=float)
    ell2 = np.asarray(ell2, dtype=float)
    n = X.shape[0]
    Xs = X / np.sqrt(lambda_curv)
    M = Xs @ Xs.T
    g = np.sqrt(ell2)
    Kmat = np.eye(n) + (g[:, None] * M) * g[None, :]
    try:
        LK = sla.cholesky(Kmat, lower=True, check_finite=False)
    except sla.LinAlgError:
        raise SingularInnerMatrix("I + G M G not factorizable") from None
    GM = g[:, None] * M
    T = sla.solve_triangular(LK, GM, lower=True, check_finite=False)
    return np.diag(M) - np.sum(T * T, axis=0)


def block_inverse_check(A: np.ndarray, B: np.ndarray, C: np.ndarray) -> bool:
    """Verify the 2x2 block-inverse identity against an explicit inverse.

    Builds [[A, B], [B', C]]^{-1} from D = (C - B' A^{-1} B)^{-1} and compares
    with numpy's full inverse; test-only helper.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    C = np.asarray(C, dtype=float)
    top = np.hstack([A, B])
    bot = np.hstack([B.T, C])
    full = np.vstack([top, bot])
    try:
        sla.cholesky(full, check_finite=False)
    except sla.LinAlgError:
        raise NotPositiveDefinite("block matrix is not positive definite") from None

    Ainv = np.linalg.inv(A)
    D = np.linalg.inv(C - B.T @ Ainv @ B)
    AiB = Ainv @ B
    ul = Ainv + AiB @ D @ AiB.T
    ur = -AiB @ D
    assembled = np.vstack([np.hstack([ul, ur]), np.hstack([ur.T, D])])
    ref = np.linalg.inv(full)
    return bool(np.max(np.abs(assembled - ref)) <= 1e-9 * max(1.0, np.max(np.abs(ref))))
