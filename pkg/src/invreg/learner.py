"""Online second-order learners.

The main learner minimizes, after every observation, the exponentially
weighted squared error plus ``(lam/2) theta^T Hhat_t theta``, where
``Hhat_t`` is the data Hessian restricted to the non-intercept coordinates.
Its Hessian obeys

    Ht_t = gamma * Ht_{t-1} + x_t x_t^T + lam * xhat_t xhat_t^T,   Ht_0 = 0,

so the inverse can be carried forward with two rank-one updates per step.
Until ``Ht`` has full rank the pseudo-inverse is carried instead (via
:func:`invreg.linalg.pinv_rank1_update_proposed`) and ``theta`` is the
minimum-norm minimizer.

``g_t = gamma * g_{t-1} + y_t x_t`` is the linear term: the weighted MSE has
gradient ``H_t theta - g_t``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BadHyperparameter, DenominatorTooSmall, DimensionMismatch, NegativeProjection, SingularSystem
from .linalg import (PinvState, SymmetricMatrix, matrix_rank, pinv_oracle, pinv_rank1_update_proposed,
                     sherman_morrison_scaled_update)
from .loss import FeatureVector, regularized_hessian_step

log = logging.getLogger(__name__)


def _check_hyper(n, gamma, lam):
    if int(n) != n or n < 1:
        raise BadHyperparameter(f"dimension must be a positive integer, got {n!r}")
    if not (0.0 < gamma <= 1.0):
        raise BadHyperparameter(f"gamma must lie in (0, 1], got {gamma!r}")
    if not (lam >= 0.0) or not math.isfinite(lam):
        raise BadHyperparameter(f"lambda must be finite and >= 0, got {lam!r}")


@dataclass(frozen=True)
class LearnerState:
    ht: SymmetricMatrix
    ht_pinv: SymmetricMatrix
    g: np.ndarray
    theta: np.ndarray
    step: int
    gamma: float
    lam: float
    full_rank: bool = False
    rank: int = 0
    # set once Sherman-Morrison hits a vanishing denominator; never cleared
    pinv_only: bool = False

    @property
    def n(self) -> int:
        return self.g.size


def learner_init(n: int, gamma: float, lam: float) -> LearnerState:
    _check_hyper(n, gamma, lam)
    z = np.zeros((n, n))
    return LearnerState(ht=z, ht_pinv=z.copy(), g=np.zeros(n), theta=np.zeros(n), step=0,
                        gamma=float(gamma), lam=float(lam))


def predict(state, x: FeatureVector) -> float:
    """``theta . x.full`` for any state carrying a ``theta`` attribute."""
    theta = state.theta
    if x.n != theta.size:
        raise DimensionMismatch(f"feature length {x.n} vs model dimension {theta.size}")
    return float(theta @ x.full)


def _pinv_path(ht_prev, p_prev, rank, x, gamma, lam):
    ps = PinvState(ht_prev, p_prev, rank).scaled(gamma)
    ps = pinv_rank1_update_proposed(ps, x.full)
    if lam > 0.0:
        ps = pinv_rank1_update_proposed(ps, math.sqrt(lam) * x.hatted)
    return ps.h_pinv, ps.rank_hint


def update(state: LearnerState, x: FeatureVector, y: float) -> LearnerState:
    """Absorb ``(x, y)`` and return the next state in O(n^2)."""
    if x.n != state.n:
        raise DimensionMismatch(f"feature length {x.n} vs model dimension {state.n}")
    gamma, lam = state.gamma, state.lam
    g = gamma * state.g + y * x.full
    ht = regularized_hessian_step(state.ht, x, gamma, lam)
    full_rank, rank, pinv_only = state.full_rank, state.rank, state.pinv_only

    if full_rank and not pinv_only:
        try:
            p = sherman_morrison_scaled_update(state.ht_pinv, x.full, gamma)
            if lam > 0.0:
                p = sherman_morrison_scaled_update(p, math.sqrt(lam) * x.hatted, 1.0)
        except DenominatorTooSmall:
            log.warning("step %d: Sherman-Morrison denominator vanished, switching to pseudo-inverse updates",
                        state.step + 1)
            pinv_only = True
            p, rank = _pinv_path(state.ht, state.ht_pinv, rank, x, gamma, lam)
    else:
        try:
            p, rank = _pinv_path(state.ht, state.ht_pinv, rank, x, gamma, lam)
        except NegativeProjection:
            log.warning("step %d: projector round-off out of tolerance (ill-conditioned Hessian), "
                        "recomputing the pseudo-inverse directly", state.step + 1)
            p, rank = pinv_oracle(ht), matrix_rank(ht)
        if rank >= state.n:
            full_rank = True

    return replace(state, ht=ht, ht_pinv=p, g=g, theta=p @ g, step=state.step + 1,
                   full_rank=full_rank, rank=min(rank, state.n), pinv_only=pinv_only)


def oracle_theta(state: LearnerState) -> np.ndarray:
    """Minimizer recomputed non-recursively from the stored Hessian (O(n^3))."""
    return pinv_oracle(state.ht) @ state.g


def solve_theta(ht: SymmetricMatrix, g: np.ndarray) -> np.ndarray:
    """Per-step direct solve used as the O(n^3) timing reference."""
    return np.linalg.solve(ht, g)


@dataclass(frozen=True)
class RidgeState:
    """Accumulated ``H_t`` and ``g_t`` for the standard L2 (ridge) baseline."""

    h: SymmetricMatrix
    g: np.ndarray
    gamma: float
    lam: float
    step: int = 0

    @property
    def n(self) -> int:
        return self.g.size


def ridge_init(n: int, gamma: float, lam: float) -> RidgeState:
    _check_hyper(n, gamma, lam)
    return RidgeState(h=np.zeros((n, n)), g=np.zeros(n), gamma=float(gamma), lam=float(lam))


def ridge_update(state: RidgeState, x: FeatureVector, y: float) -> RidgeState:
    if x.n != state.n:
        raise DimensionMismatch(f"feature length {x.n} vs model dimension {state.n}")
    v = x.full
    return replace(state, h=state.gamma * state.h + np.outer(v, v), g=state.gamma * state.g + y * v,
                   step=state.step + 1)


def ridge_solve(state: RidgeState) -> np.ndarray:
    """``(H_t + lam I)^{-1} g_t`` by a direct solve."""
    a = state.h + state.lam * np.eye(state.n)
    if state.lam == 0.0 and matrix_rank(a) < state.n:
        raise SingularSystem("lambda = 0 and H_t is rank-deficient")
    try:
        return np.linalg.solve(a, state.g)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
