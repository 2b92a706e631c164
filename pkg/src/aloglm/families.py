"""Loss families: value and first/second derivatives in the linear predictor.

Each family models a per-observation loss l(y | z) with z the linear
predictor x'b.  All families are convex in z.  The Poisson exp-link loss
drops the data-only log(y!) term: it cancels in every comparison across
lambda and in ALO-vs-LO differences.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import UnsupportedResponse

_TAGS = {
    "gaussian": K.FAM_GAUSSIAN,
    "logistic": K.FAM_LOGISTIC,
    "poisson_exp": K.FAM_POISSON_EXP,
    "poisson_softrect": K.FAM_POISSON_SOFTRECT,
    "pseudo_huber": K.FAM_PSEUDO_HUBER,
}


@dataclass(frozen=True)
class LossFamily:
    tag: str
    gamma: float = 1.0  # pseudo-Huber scale, ignored by other families

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise UnsupportedResponse(f"unknown loss family {self.tag!r}")
        if self.tag == "pseudo_huber" and not self.gamma > 0:
            raise UnsupportedResponse("pseudo-Huber scale must be positive")

    @property
    def code(self) -> int:
        return _TAGS[self.tag]

    @property
    def is_poisson(self) -> bool:
        return self.tag in ("poisson_exp", "poisson_softrect")

    def rate(self, z):
        """Conditional mean of y given linear predictor z (Poisson families)."""
        z = np.asarray(z, dtype=float)
        if self.tag == "poisson_exp":
            return np.exp(z)
        if self.tag == "poisson_softrect":
            return K.softplus(z)
        raise UnsupportedResponse(f"{self.tag} has no rate function")

    def validate_response(self, y) -> None:
        y = np.asarray(y, dtype=float)
        if not np.all(np.isfinite(y)):
            raise UnsupportedResponse("response contains non-finite values")
        if self.tag == "logistic":
            if not np.all((y == 0.0) | (y == 1.0)):
                raise UnsupportedResponse("logistic response must be in {0, 1}")
        elif self.is_poisson:
            if np.any(y < 0) or np.any(y != np.floor(y)):
                raise UnsupportedResponse("Poisson response must be a nonnegative integer")


def gaussian() -> LossFamily:
    return LossFamily("gaussian")


def logistic() -> LossFamily:
    return LossFamily("logistic")


def poisson() -> LossFamily:
    return LossFamily("poisson_exp")


def poisson_softrect() -> LossFamily:
    return LossFamily("poisson_softrect")


def pseudo_huber(gamma: float) -> LossFamily:
    return LossFamily("pseudo_huber", gamma=gamma)


def _eval(fn, fam: LossFamily, y, z):
    ya = np.atleast_1d(np.asarray(y, dtype=float))
    za = np.atleast_1d(np.asarray(z, dtype=float))
    fam.validate_response(ya)
    ya, za = np.broadcast_arrays(ya, za)
    out = fn(fam.code, fam.gamma, np.ascontiguousarray(ya), np.ascontiguousarray(za))
    if np.isscalar(y) and np.isscalar(z):
        return float(out[0])
    return out


def loss_value(fam: LossFamily, y, z):
    """l(y | z); scalar in, scalar out."""
    return _eval(K.loss_values, fam, y, z)


def loss_d1(fam: LossFamily, y, z):
    """dl/dz."""
    return _eval(K.loss_d1s, fam, y, z)


def loss_d2(fam: LossFamily, y, z):
    """d2l/dz2, nonnegative for every family."""
    return _eval(K.loss_d2s, fam, y, z)
