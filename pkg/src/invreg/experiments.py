"""Experiment drivers behind the CLI. Each returns plain row dicts."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import first_order as fo
from .data import SyntheticLinearConfig, derive_seed, gaussian_vectors, gen_linear_gaussian
from .errors import ConfigError, SeriesTooShort
from .learner import learner_init, predict, ridge_init, ridge_solve, ridge_update, update
from .linalg import BASELINE, PROPOSED, PinvState, pinv_oracle, pinv_rank1_update, rank_one_workspace, relative_error
from .loss import Observation
from .models import ArSpec, LinearTransform, apply_transform, ar_featurize

REGULARIZERS = ("invariant", "l2")
OPTIMIZERS = ("second-order", "adam", "adagrad", "rmsprop", "naive")
L2_AXIS_FACTOR = 0.01  # sunspot sweep: nominal lambda / 100 for the L2 regularizer
DEFAULT_LAMBDAS = (0.0,) + tuple(m * 10.0 ** e for e in range(-3, 4) for m in (1, 2, 5))


def _map(fn: Callable, items: Sequence, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- recursive pseudo-inverse accuracy ---------------------------------------

@dataclass(frozen=True)
class PinvBenchConfig:
    ns: tuple[int, ...] = (32,)
    method: str = "both"
    seed: int = 0
    jobs: int = 1

    @property
    def methods(self) -> tuple[str, ...]:
        if self.method == "both":
            return (PROPOSED, BASELINE)
        return (self.method,)

    def __post_init__(self):
        if not self.ns or any(n < 1 for n in self.ns):
            raise ConfigError("n must be >= 1")
        if self.method not in ("both", PROPOSED, BASELINE):
            raise ConfigError(f"method must be proposed, baseline or both, got {self.method!r}")


def pinv_stream_errors(n: int, seed: int, methods: Sequence[str] = (PROPOSED, BASELINE)) -> list[dict]:
    """Accumulate ``H_t = H_{t-1} + x_t x_t^T`` for t = 1..n with every method.

    All methods consume the same vectors. At each step the recursive estimate
    is compared to a fresh eigendecomposition pseudo-inverse of ``H_t``.
    """
    xs = gaussian_vectors(n, n, seed)
    states = {m: PinvState.zeros(n) for m in methods}
    h = np.zeros((n, n))
    rows = []
    for t, c in enumerate(xs, start=1):
        h = h + np.outer(c, c)
        truth = pinv_oracle(h)
        row = {"n": n, "t": t, "seed": seed}
        for m in methods:
            ws = rank_one_workspace(states[m], c, m)
            states[m] = pinv_rank1_update(states[m], c, m)
            row[f"relative_error_{m}"] = relative_error(states[m].h_pinv, truth)
            row[f"u_dot_c_{m}"] = ws.u_dot_c / float(c @ c)
        rows.append(row)
    return rows


def _pinv_point(args):
    n, seed, methods = args
    return pinv_stream_errors(n, seed, methods)


def run_pinv_bench(cfg: PinvBenchConfig) -> list[dict]:
    points = [(n, derive_seed(cfg.seed, "pinv-bench", n), cfg.methods) for n in cfg.ns]
    return [row for rows in _map(_pinv_point, points, cfg.jobs) for row in rows]


# -- ridge scale sensitivity ---------------------------------------------------

@dataclass(frozen=True)
class RidgeScalingConfig:
    kappas: tuple[float, ...] = (0.1, 0.5, 1.0, 2.0, 10.0)
    lam: float = 1.0
    samples: int = 10_000
    seed: int = 0
    regularizer: str = "l2"

    def __post_init__(self):
        if any(k <= 0 for k in self.kappas):
            raise ConfigError("every kappa must be > 0")
        if self.regularizer not in REGULARIZERS:
            raise ConfigError(f"regularizer must be one of {REGULARIZERS}")
        if self.lam < 0:
            raise ConfigError("lambda must be >= 0")


def fit_batch(history: Sequence[Observation], regularizer: str, lam: float) -> np.ndarray:
    """Minimizer over the whole history (no forgetting).

    ``l2`` uses a direct ridge solve, ``invariant`` runs the recursive learner.
    """
    n = history[0].x.n
    if regularizer == "l2":
        st = ridge_init(n, 1.0, lam)
        for obs in history:
            st = ridge_update(st, obs.x, obs.y)
        return ridge_solve(st)
    st = learner_init(n, 1.0, lam)
    for obs in history:
        st = update(st, obs.x, obs.y)
    return st.theta


def run_ridge_scaling(cfg: RidgeScalingConfig) -> list[dict]:
    """Fit after observing ``x_1 / kappa``; report weights in the original units.

    Every kappa reuses one data set, so differences between rows come from
    the regularizer alone.
    """
    data = gen_linear_gaussian(SyntheticLinearConfig(
        num_features=2, num_samples=cfg.samples, noise_std=1.0, true_weights=(1.0, 1.0),
        seed=derive_seed(cfg.seed, "ridge-scaling", cfg.samples)))
    rows = []
    for kappa in cfg.kappas:
        t = LinearTransform.scaling([1.0, 1.0 / kappa])
        scaled = [apply_transform(obs, t) for obs in data]
        theta_scaled = fit_batch(scaled, cfg.regularizer, cfg.lam)
        rows.append({
            "kappa": kappa, "regularizer": cfg.regularizer, "lambda": cfg.lam, "samples": cfg.samples,
            "theta0": float(theta_scaled[0]), "theta1": float(theta_scaled[1] / kappa),
            "theta1_scaled": float(theta_scaled[1]), "seed": cfg.seed,
        })
    return rows


# -- online prediction -------------------------------------------------------

def online_predictions(observations: Sequence[Observation], optimizer: str = "second-order",
                       regularizer: str = "invariant", gamma: float = 0.99, lam: float = 0.0,
                       **hyper) -> np.ndarray:
    """One-step-ahead predictions: predict ``y_t`` from the state after ``t-1`` updates.

    ``naive`` predicts the most recent lag (``x.checked[0]``), i.e. y_{t-1}
    for AR features. For ``l2`` with ``lam == 0`` the invariant learner is
    used, since both losses then coincide.
    """
    if optimizer not in OPTIMIZERS:
        raise ConfigError(f"optimizer must be one of {OPTIMIZERS}, got {optimizer!r}")
    if regularizer not in REGULARIZERS:
        raise ConfigError(f"regularizer must be one of {REGULARIZERS}, got {regularizer!r}")
    if not observations:
        raise SeriesTooShort("no observations to predict")
    preds = np.empty(len(observations))
    n = observations[0].x.n
    if optimizer == "naive":
        return np.array([obs.x.checked[0] for obs in observations])
    if optimizer in fo.VARIANTS:
        st = fo.first_order_init(n, **hyper)
        for i, obs in enumerate(observations):
            preds[i] = predict(st, obs.x)
            st = fo.first_order_step(st, obs.x, obs.y, optimizer)
        return preds
    if regularizer == "l2" and lam > 0.0:
        st = ridge_init(n, gamma, lam)
        theta = np.zeros(n)
        for i, obs in enumerate(observations):
            preds[i] = float(theta @ obs.x.full)
            st = ridge_update(st, obs.x, obs.y)
            theta = ridge_solve(st)
        return preds
    st = learner_init(n, gamma, lam if regularizer == "invariant" else 0.0)
    for i, obs in enumerate(observations):
        preds[i] = predict(st, obs.x)
        st = update(st, obs.x, obs.y)
    return preds


def rmse(errors: np.ndarray, skip: int = 0) -> float:
    e = np.asarray(errors, dtype=float)[skip:]
    if e.size == 0:
        raise SeriesTooShort(f"nothing left to score after skipping {skip} steps")
    return math.sqrt(float(np.mean(e * e)))


def interval_mses(errors: np.ndarray, intervals: int = 10) -> np.ndarray:
    """MSE on each of ``intervals`` consecutive chunks of (nearly) equal length."""
    e = np.asarray(errors, dtype=float)
    if e.size < intervals:
        raise SeriesTooShort(f"need at least {intervals} scored steps, got {e.size}")
    return np.array([float(np.mean(c * c)) for c in np.array_split(e, intervals)])


def summarize(errors: np.ndarray, reference_errors: np.ndarray | None = None, skip: int = 0,
              intervals: int = 10) -> dict:
    """MSE/RMSE, interval-MSE spread for error bars, and relative MSE vs a reference.

    Error bars are the population standard deviation (ddof=0) of the per-interval
    MSEs; for relative MSE that spread is divided by the reference MSE.
    """
    e = np.asarray(errors, dtype=float)[skip:]
    mse = float(np.mean(e * e))
    parts = interval_mses(e, intervals)
    out = {
        "steps_scored": int(e.size), "skip_burnin": int(skip), "mse": mse, "rmse": math.sqrt(mse),
        "interval_mse": parts.tolist(), "interval_mse_std": float(np.std(parts)),
    }
    if reference_errors is not None:
        r = np.asarray(reference_errors, dtype=float)[skip:]
        if r.size != e.size:
            raise ConfigError(f"reference has {r.size} scored steps, run has {e.size}")
        ref_mse = float(np.mean(r * r))
        out["reference_mse"] = ref_mse
        out["relative_mse"] = mse / ref_mse
        out["relative_mse_interval_std"] = float(np.std(parts)) / ref_mse
    return out


# -- sunspot lambda sweep ------------------------------------------------------

@dataclass(frozen=True)
class SunspotSweepConfig:
    orders: tuple[int, ...] = (2, 3, 4)
    gamma: float = 0.99
    lambdas: tuple[float, ...] = DEFAULT_LAMBDAS
    regularizer: str = "both"
    # "raw": lambda as given; "forgetting": invariant lambda multiplied by (1 - gamma)
    lambda_scale: str = "raw"
    jobs: int = 1

    @property
    def regularizers(self) -> tuple[str, ...]:
        return REGULARIZERS if self.regularizer == "both" else (self.regularizer,)

    def __post_init__(self):
        if self.regularizer != "both" and self.regularizer not in REGULARIZERS:
            raise ConfigError(f"regularizer must be invariant, l2 or both, got {self.regularizer!r}")
        if self.lambda_scale not in ("raw", "forgetting"):
            raise ConfigError("lambda_scale must be raw or forgetting")
        if any(l < 0 for l in self.lambdas):
            raise ConfigError("lambdas must be >= 0")
        if not 0 < self.gamma <= 1:
            raise ConfigError("gamma must lie in (0, 1]")

    def effective_lambda(self, regularizer: str, lam: float) -> float:
        if regularizer == "l2":
            return lam * L2_AXIS_FACTOR
        if self.lambda_scale == "forgetting":
            return lam * (1.0 - self.gamma)
        return lam


def _sweep_point(args):
    values, order, reg, lam, lam_eff, gamma = args
    spec = ArSpec(order)
    obs = ar_featurize(values, spec)
    y = np.array([o.y for o in obs])
    err = online_predictions(obs, "second-order", reg, gamma, lam_eff) - y
    return {
        "order": order, "regularizer": reg, "lambda": lam, "lambda_effective": lam_eff, "gamma": gamma,
        "steps": int(err.size), "burnin": spec.n,
        "rmse": rmse(err), "rmse_skip_burnin": rmse(err, spec.n),
    }


def run_sunspot_sweep(values: np.ndarray, cfg: SunspotSweepConfig) -> list[dict]:
    """RMSE of online one-step-ahead AR predictions for each (order, regularizer, lambda).

    ``rmse`` scores every predicted step; ``rmse_skip_burnin`` drops the first
    ``order + 1`` predictions, made while the Hessian is still rank-deficient.
    """
    values = np.asarray(values, dtype=float)
    if values.size <= max(cfg.orders) + 1:
        raise SeriesTooShort(f"series of length {values.size} too short for order {max(cfg.orders)}")
    points = [(values, p, reg, lam, cfg.effective_lambda(reg, lam), cfg.gamma)
              for p in cfg.orders for reg in cfg.regularizers for lam in cfg.lambdas]
    return _map(_sweep_point, points, cfg.jobs)


def best_rows(rows: Iterable[dict], key: str = "rmse") -> dict[str, dict]:
    """Row with the smallest ``key`` for each regularizer."""
    best: dict[str, dict] = {}
    for r in rows:
        cur = best.get(r["regularizer"])
        if cur is None or r[key] < cur[key]:
            best[r["regularizer"]] = r
    return best
