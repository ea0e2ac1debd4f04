"""Exponentially weighted losses for linear models and their Hessian recursions.

Weights ``theta`` are 1-d arrays of length n. When features carry an intercept,
``theta[0]`` is the intercept and is never penalized by the invariant
regularizer.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyHistory
from .linalg import SymmetricMatrix

# theta[0] is the intercept, theta[1:] the slope
WeightVector = np.ndarray


@dataclass(frozen=True)
class FeatureVector:
    """Regression input x_t.

    With ``intercept=True`` (the default) ``full[0]`` must be exactly 1 and
    ``hatted`` is ``full`` with that slot zeroed. With ``intercept=False``
    there is no unpenalized coordinate and ``hatted`` equals ``full``.
    """

    full: np.ndarray
    intercept: bool = True

    def __post_init__(self):
        full = np.asarray(self.full, dtype=float)
        if full.ndim != 1 or full.size == 0:
            raise DimensionMismatch(f"feature vector must be 1-d and nonempty, got shape {full.shape}")
        if self.intercept and full[0] != 1.0:
            raise ValueError(f"intercept slot must be exactly 1, got {full[0]!r}")
        object.__setattr__(self, "full", full)

    @classmethod
    def from_checked(cls, checked) -> "FeatureVector":
        return cls(np.concatenate(([1.0], np.asarray(checked, dtype=float))))

    @property
    def n(self) -> int:
        return self.full.size

    @property
    def checked(self) -> np.ndarray:
        return self.full[1:] if self.intercept else self.full

    @property
    def hatted(self) -> np.ndarray:
        if not self.intercept:
            return self.full
        out = self.full.copy()
        out[0] = 0.0
        return out


@dataclass(frozen=True)
class Observation:
    x: FeatureVector
    y: float


def _stack(history: Sequence[Observation], gamma: float):
    if len(history) == 0:
        raise EmptyHistory("loss needs at least one observation")
    x = np.stack([obs.x.full for obs in history])
    xh = np.stack([obs.x.hatted for obs in history])
    y = np.array([obs.y for obs in history], dtype=float)
    # history is oldest-first; the newest observation has weight gamma^0
    w = gamma ** np.arange(len(history) - 1, -1, -1, dtype=float)
    return x, xh, y, w


def weighted_mse(theta: WeightVector, history: Sequence[Observation], gamma: float) -> float:
    """``(1/2) sum_d gamma^d (theta.x_{t-d} - y_{t-d})^2`` over an oldest-first history."""
    x, _, y, w = _stack(history, gamma)
    r = x @ np.asarray(theta, dtype=float) - y
    return 0.5 * float(w @ (r * r))


def hessian_step(h_prev: SymmetricMatrix, x, gamma: float) -> SymmetricMatrix:
    """``gamma * h_prev + x x^T``.

    ``x`` may be a :class:`FeatureVector` (its ``full`` part is used) or a raw
    vector; pass ``fv.hatted`` to accumulate the intercept-free Hessian.
    """
    v = x.full if isinstance(x, FeatureVector) else np.asarray(x, dtype=float)
    if h_prev.shape != (v.size, v.size):
        raise DimensionMismatch(f"h_prev {h_prev.shape} vs x of length {v.size}")
    return gamma * h_prev + np.outer(v, v)


def regularized_hessian_step(ht_prev: SymmetricMatrix, x: FeatureVector, gamma: float,
                             lam: float) -> SymmetricMatrix:
    """``gamma * ht_prev + x x^T + lam * xhat xhat^T``."""
    if ht_prev.shape != (x.n, x.n):
        raise DimensionMismatch(f"ht_prev {ht_prev.shape} vs x of length {x.n}")
    xh = x.hatted
    return gamma * ht_prev + np.outer(x.full, x.full) + lam * np.outer(xh, xh)


def accumulate(history: Sequence[Observation], gamma: float):
    """Non-recursive ``(H_t, Hhat_t, g_t)`` built from the explicit weighted sums."""
    x, xh, y, w = _stack(history, gamma)
    h = (x * w[:, None]).T @ x
    hh = (xh * w[:, None]).T @ xh
    g = x.T @ (w * y)
    return h, hh, g


def invariant_reg_loss(theta: WeightVector, history: Sequence[Observation], gamma: float,
                       lam: float) -> float:
    """Weighted MSE plus ``(lam/2) theta^T Hhat_t theta``."""
    theta = np.asarray(theta, dtype=float)
    _, hh, _ = accumulate(history, gamma)
    return weighted_mse(theta, history, gamma) + 0.5 * lam * float(theta @ hh @ theta)


def l2_reg_loss(theta: WeightVector, history: Sequence[Observation], gamma: float,
                lam: float) -> float:
    """Weighted MSE plus ``(lam/2) |theta|^2``; every component is penalized."""
    theta = np.asarray(theta, dtype=float)
    return weighted_mse(theta, history, gamma) + 0.5 * lam * float(theta @ theta)
