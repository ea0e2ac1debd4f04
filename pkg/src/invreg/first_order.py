"""First-order adaptive baselines (Adam, AdaGrad, RMSProp).

Each step is one gradient step on the instantaneous loss
``(1/2) (theta.x - y)^2``, whose gradient is ``(theta.x - y) x``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import BadHyperparameter, DimensionMismatch
from .loss import FeatureVector

VARIANTS = ("adam", "adagrad", "rmsprop")


@dataclass(frozen=True)
class FirstOrderState:
    theta: np.ndarray
    m: np.ndarray  # first moment (adam only)
    v: np.ndarray  # second moment / squared-gradient sum
    t: int = 0
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    rho: float = 0.9
    eps: float = 1e-8


def first_order_init(n: int, **hyper) -> FirstOrderState:
    if n < 1:
        raise BadHyperparameter(f"dimension must be >= 1, got {n}")
    state = FirstOrderState(theta=np.zeros(n), m=np.zeros(n), v=np.zeros(n), **hyper)
    if state.lr <= 0 or state.eps <= 0:
        raise BadHyperparameter("lr and eps must be positive")
    if not (0 <= state.beta1 < 1 and 0 <= state.beta2 < 1 and 0 <= state.rho < 1):
        raise BadHyperparameter("decay rates must lie in [0, 1)")
    return state


def gradient(theta, x: FeatureVector, y: float) -> np.ndarray:
    return (float(theta @ x.full) - y) * x.full


def first_order_step(state: FirstOrderState, x: FeatureVector, y: float, variant: str) -> FirstOrderState:
    if x.n != state.theta.size:
        raise DimensionMismatch(f"feature length {x.n} vs model dimension {state.theta.size}")
    grad = gradient(state.theta, x, y)
    t = state.t + 1
    if variant == "adam":
        m = state.beta1 * state.m + (1 - state.beta1) * grad
        v = state.beta2 * state.v + (1 - state.beta2) * grad * grad
        m_hat = m / (1 - state.beta1 ** t)
        v_hat = v / (1 - state.beta2 ** t)
        theta = state.theta - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
        return replace(state, theta=theta, m=m, v=v, t=t)
    if variant == "adagrad":
        v = state.v + grad * grad
        theta = state.theta - state.lr * grad / (np.sqrt(v) + state.eps)
        return replace(state, theta=theta, v=v, t=t)
    if variant == "rmsprop":
        v = state.rho * state.v + (1 - state.rho) * grad * grad
        theta = state.theta - state.lr * grad / (np.sqrt(v) + state.eps)
        return replace(state, theta=theta, v=v, t=t)
    raise BadHyperparameter(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def effective_step_sizes(state: FirstOrderState, variant: str) -> np.ndarray:
    """Per-coordinate multiplier applied to the gradient on the next step."""
    if variant in ("adagrad", "rmsprop"):
        return state.lr / (np.sqrt(state.v) + state.eps)
    if variant == "adam":
        t = max(state.t, 1)
        return state.lr / (np.sqrt(state.v / (1 - state.beta2 ** t)) + state.eps)
    raise BadHyperparameter(f"unknown variant {variant!r}")
