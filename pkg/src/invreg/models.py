"""AR featurization and linear recoordinatization of the non-intercept inputs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError, DimensionMismatch, SeriesTooShort
from .loss import FeatureVector, Observation


@dataclass(frozen=True)
class ArSpec:
    order: int
    include_intercept: bool = True

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ConfigError(f"AR order must be a positive integer, got {self.order!r}")

    @property
    def n(self) -> int:
        return self.order + int(self.include_intercept)

    @classmethod
    def parse(cls, text: str) -> "ArSpec":
        """Parse ``"ar:p"``."""
        kind, _, order = text.partition(":")
        if kind != "ar" or not order.isdigit():
            raise ConfigError(f"model must look like 'ar:<order>', got {text!r}")
        return cls(int(order))


def ar_features(lags, spec: ArSpec) -> FeatureVector:
    """Features from the most-recent-first lag vector ``(s_{t-1}, ..., s_{t-p})``."""
    lags = np.asarray(lags, dtype=float)
    if spec.include_intercept:
        return FeatureVector(np.concatenate(([1.0], lags)))
    return FeatureVector(lags, intercept=False)


def ar_featurize(series: Sequence[float], spec: ArSpec) -> list[Observation]:
    """One observation per t >= p with x = (1, s_{t-1}, ..., s_{t-p}) and y = s_t."""
    s = np.asarray(series, dtype=float)
    p = spec.order
    if s.size <= p:
        raise SeriesTooShort(f"series of length {s.size} is too short for AR order {p}")
    return [Observation(ar_features(s[t - p:t][::-1], spec), float(s[t])) for t in range(p, s.size)]


@dataclass(frozen=True)
class LinearTransform:
    """Invertible map ``M`` applied to the non-intercept coordinates only."""

    m: np.ndarray
    m_inv: np.ndarray = field(default=None)

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.m, dtype=float))
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"transform must be square, got {m.shape}")
        m_inv = np.linalg.inv(m) if self.m_inv is None else np.asarray(self.m_inv, dtype=float)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "m_inv", m_inv)

    @property
    def dim(self) -> int:
        return self.m.shape[0]

    @property
    def inverse(self) -> "LinearTransform":
        return LinearTransform(self.m_inv, self.m)

    @classmethod
    def scaling(cls, factors) -> "LinearTransform":
        """Diagonal transform multiplying coordinate i by ``factors[i]``."""
        f = np.asarray(factors, dtype=float)
        return cls(np.diag(f), np.diag(1.0 / f))

    @classmethod
    def random(cls, rng: np.random.Generator, dim: int, max_cond: float = 100.0) -> "LinearTransform":
        """Gaussian matrix, resampled until its condition number is at most ``max_cond``."""
        while True:
            m = rng.standard_normal((dim, dim))
            if np.linalg.cond(m) <= max_cond:
                return cls(m)


def apply_transform(obs: Observation, t: LinearTransform) -> Observation:
    x = obs.x
    checked = x.checked
    if checked.size != t.dim:
        raise DimensionMismatch(f"transform of order {t.dim} vs {checked.size} non-intercept inputs")
    new = t.m @ checked
    if x.intercept:
        return Observation(FeatureVector(np.concatenate(([x.full[0]], new))), obs.y)
    return Observation(FeatureVector(new, intercept=False), obs.y)


def transform_history(history: Sequence[Observation], t: LinearTransform) -> list[Observation]:
    return [apply_transform(obs, t) for obs in history]


def contravary_weights(theta, t: LinearTransform, intercept: bool = True) -> np.ndarray:
    """Weights for transformed inputs: slope becomes ``M^{-T} slope``, intercept kept."""
    theta = np.asarray(theta, dtype=float)
    k = int(intercept)
    if theta.size - k != t.dim:
        raise DimensionMismatch(f"transform of order {t.dim} vs {theta.size - k} slope weights")
    out = theta.copy()
    out[k:] = t.m_inv.T @ theta[k:]
    return out
