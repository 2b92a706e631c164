"""Separable penalties: value, elementwise derivatives, curvature, proximal maps.

Conventions (documented, never mixed within one computation):

* ridge is r(z) = z^2, so its curvature is 2;
* elastic net uses r(z) = (1-mix)/2 * z^2 + mix * |z| with a single global
  lambda; the two-lambda form used by the active-set ALO formula is recovered
  through ``elastic_net_split``: lam1 = lam*(1-mix)/2, lam2 = lam*mix;
* bridge is r(z) = |z|^q with q strictly inside (1, 2);
* smoothed l1 is r_a(z) = (1/a)(log(1+e^{az}) + log(1+e^{-az})), a smooth
  upper approximation of |z| with uniform gap 2*log(2)/a.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import InvalidConfig, NonSmoothAtZero, ProxNoConvergence

_TAGS = {
    "ridge": K.PEN_RIDGE,
    "l1": K.PEN_L1,
    "elastic_net": K.PEN_ELASTIC_NET,
    "bridge": K.PEN_BRIDGE,
    "smoothed_l1": K.PEN_SMOOTHED_L1,
}

ACTIVE_TOL = 1e-8


@dataclass(frozen=True)
class Penalty:
    tag: str
    mix: float = 0.5      # elastic net l1 fraction
    q: float = 1.5        # bridge exponent
    alpha: float = 100.0  # smoothed-l1 sharpness

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise InvalidConfig(f"unknown penalty {self.tag!r}")
        if self.tag == "elastic_net" and not 0.0 <= self.mix <= 1.0:
            raise InvalidConfig("elastic net mix must be in [0, 1]")
        if self.tag == "bridge" and not 1.0 < self.q < 2.0:
            raise InvalidConfig("bridge exponent must be strictly inside (1, 2)")
        if self.tag == "smoothed_l1" and not self.alpha > 0:
            raise InvalidConfig("smoothed-l1 sharpness must be positive")

    @property
    def code(self) -> int:
        return _TAGS[self.tag]

    @property
    def param(self) -> float:
        if self.tag == "elastic_net":
            return self.mix
        if self.tag == "bridge":
            return self.q
        if self.tag == "smoothed_l1":
            return self.alpha
        return 0.0

    @property
    def has_l1_part(self) -> bool:
        return self.tag == "l1" or (self.tag == "elastic_net" and self.mix > 0)

    @property
    def is_smooth(self) -> bool:
        """Twice differentiable everywhere."""
        return self.tag in ("ridge", "smoothed_l1") or (
            self.tag == "elastic_net" and self.mix == 0.0
        )


def ridge() -> Penalty:
    return Penalty("ridge")


def l1() -> Penalty:
    return Penalty("l1")


def elastic_net(mix: float) -> Penalty:
    return Penalty("elastic_net", mix=mix)


def bridge(q: float) -> Penalty:
    return Penalty("bridge", q=q)


def smoothed_l1(alpha: float) -> Penalty:
    return Penalty("smoothed_l1", alpha=alpha)


def elastic_net_split(lam: float, mix: float) -> tuple[float, float]:
    """Single-lambda convention -> (lam1, lam2) of lam1*||b||_2^2 + lam2*||b||_1."""
    return lam * (1.0 - mix) / 2.0, lam * mix


def _arr(beta):
    return np.ascontiguousarray(np.atleast_1d(np.asarray(beta, dtype=float)))


def pen_value(pen: Penalty, beta) -> float:
    return float(np.sum(K.pen_values(pen.code, pen.param, _arr(beta))))


def pen_d1(pen: Penalty, beta) -> np.ndarray:
    b = _arr(beta)
    if pen.has_l1_part and np.any(b == 0.0):
        raise NonSmoothAtZero("l1 gradient requested at a zero coordinate")
    return K.pen_d1s(pen.code, pen.param, b)


def pen_d2(pen: Penalty, beta) -> np.ndarray:
    b = _arr(beta)
    if (pen.has_l1_part or pen.tag == "bridge") and np.any(b == 0.0):
        raise NonSmoothAtZero(f"{pen.tag} curvature requested at a zero coordinate")
    return K.pen_d2s(pen.code, pen.param, b)


def prox(pen: Penalty, v, step: float, lam: float) -> np.ndarray:
    """argmin_u 0.5||u - v||^2 + step*lam*r(u)."""
    if not step > 0:
        raise InvalidConfig("prox step must be positive")
    if lam < 0:
        raise InvalidConfig("lambda must be nonnegative")
    va = _arr(v)
    u = K.prox_apply(pen.code, pen.param, va, step * lam)
    if pen.tag in ("bridge", "smoothed_l1") and step * lam > 0:
        resid = np.abs(u + step * lam * K.pen_d1s(pen.code, pen.param, u) - va)
        if np.any(resid > 1e-10 * (1.0 + np.abs(va))):
            raise ProxNoConvergence(f"{pen.tag} prox residual {resid.max():.3e}")
    return u


def smoothed_l1_sup_gap(alpha: float) -> float:
    """Uniform gap sup_z |r_a(z) - |z||  =  2 log 2 / a."""
    if not alpha > 0:
        raise InvalidConfig("sharpness must be positive")
    return 2.0 * np.log(2.0) / alpha


def active_set(beta) -> np.ndarray:
    """Indices j with |b_j| > 1e-8 * max(1, ||b||_inf)."""
    b = _arr(beta)
    thresh = ACTIVE_TOL * max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    return np.flatnonzero(np.abs(b) > thresh)


def curvature_at(pen: Penalty, beta) -> np.ndarray:
    """Elementwise penalty curvature at beta for hat-matrix assembly.

    Only defined for penalties that are twice differentiable at the queried
    coordinates; callers restrict to the active set first where needed.
    """
    return pen_d2(pen, beta)
