"""Series loading and synthetic data generators.

All randomness comes from :func:`make_rng`: numpy's PCG64 bit generator with
``Generator.standard_normal`` (ziggurat) for normal variates.
"""
from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, EmptyColumn, ParseError, UnstableSegment
from .loss import FeatureVector, Observation


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(seed: int, *params) -> int:
    """64-bit sub-seed: first 8 bytes of SHA-256 over ``repr((seed, *params))``."""
    digest = hashlib.sha256(repr((int(seed),) + tuple(params)).encode()).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass(frozen=True)
class Series:
    name: str
    values: np.ndarray
    timestamps: tuple[str, ...] | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise EmptyColumn(f"series {self.name!r} is empty")
        if not np.all(np.isfinite(v)):
            raise ParseError(f"series {self.name!r} contains non-finite values")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_series_csv(path, column: int | str | None = None, name: str | None = None) -> Series:
    """Read one column of a comma-separated file as a :class:`Series`.

    ``column`` is a 0-based index or a header name; by default the last column
    is used. A header row is recognized when the first row's value cell is
    not numeric. When the file has another column, column 0 (or column 1 if
    the values sit in column 0) is kept as timestamp labels. Lines starting
    with ``#`` are skipped.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1)
                if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise EmptyColumn(f"{path}: no data rows")

    first_line, first = rows[0]
    if isinstance(column, str):
        if column not in first:
            raise ConfigError(f"{path}: no column named {column!r} in header {first}")
        col = first.index(column)
    else:
        col = len(first) - 1 if column is None else int(column)
        if col < 0:
            col += len(first)
        if not 0 <= col < len(first):
            raise ConfigError(f"{path}: column index {column} out of range for {len(first)} columns")

    header = isinstance(column, str) or not _is_number(first[col])
    data = rows[1:] if header else rows
    label_col = None
    if len(first) > 1:
        label_col = 0 if col != 0 else 1

    values, labels = [], []
    for line, row in data:
        if col >= len(row):
            raise ParseError(f"{path}: row {line} has no column {col}", row=line)
        try:
            values.append(float(row[col]))
        except ValueError:
            raise ParseError(f"{path}: row {line}: cannot parse {row[col]!r} as a number", row=line) from None
        if label_col is not None:
            labels.append(row[label_col] if label_col < len(row) else "")
    if not values:
        raise EmptyColumn(f"{path}: column {col} has no values")
    if name is None:
        name = first[col] if header else path.stem
    return Series(name, np.array(values), tuple(labels) if label_col is not None else None)


def write_series_csv(series: Series, path) -> None:
    """Write ``series`` with a header; floats use ``repr`` so they round-trip exactly."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if series.timestamps is not None:
            w.writerow(["timestamp", series.name])
            w.writerows((ts, repr(float(v))) for ts, v in zip(series.timestamps, series.values))
        else:
            w.writerow([series.name])
            w.writerows((repr(float(v)),) for v in series.values)


def sunspots_path() -> Path:
    return Path(str(resources.files("invreg") / "fixtures" / "sunspots.csv"))


def load_sunspots() -> Series:
    """Monthly sunspot numbers, January 1749 to December 1983 (2820 values)."""
    return load_series_csv(sunspots_path(), "sunspots")


@dataclass(frozen=True)
class SyntheticLinearConfig:
    num_features: int = 2
    num_samples: int = 10_000
    noise_std: float = 1.0
    true_weights: tuple[float, ...] = (1.0, 1.0)
    seed: int = 0
    intercept: bool = False

    def __post_init__(self):
        if self.num_samples < 1:
            raise ConfigError("num_samples must be >= 1")
        if self.noise_std < 0:
            raise ConfigError("noise_std must be >= 0")
        expected = self.num_features + int(self.intercept)
        if len(self.true_weights) != expected:
            raise ConfigError(f"need {expected} true weights, got {len(self.true_weights)}")


def gen_linear_gaussian(config: SyntheticLinearConfig) -> list[Observation]:
    """i.i.d. N(0, 1) inputs and ``y = w.x + noise``.

    With ``intercept=False`` (the default) every coordinate is a random
    variable; with ``intercept=True`` a constant 1 is prepended and the first
    true weight is the intercept.
    """
    rng = make_rng(config.seed)
    x = rng.standard_normal((config.num_samples, config.num_features))
    eps = rng.standard_normal(config.num_samples) * config.noise_std
    if config.intercept:
        x = np.hstack([np.ones((config.num_samples, 1)), x])
    y = x @ np.asarray(config.true_weights, dtype=float) + eps
    return [Observation(FeatureVector(row, intercept=config.intercept), float(t)) for row, t in zip(x, y)]


def gaussian_vectors(n: int, count: int, seed: int) -> np.ndarray:
    """``count`` i.i.d. standard-normal vectors of length ``n``, one per row."""
    return make_rng(seed).standard_normal((count, n))


def companion_spectral_radius(coefficients: Sequence[float]) -> float:
    a = np.asarray(coefficients, dtype=float)
    if a.size == 0:
        return 0.0
    comp = np.zeros((a.size, a.size))
    comp[0] = a
    comp[1:, :-1] = np.eye(a.size - 1)
    return float(np.abs(np.linalg.eigvals(comp)).max())


@dataclass(frozen=True)
class BreakConfig:
    """Piecewise AR process. ``initial`` holds the first values of the series."""

    segment_lengths: tuple[int, ...]
    coefficients: tuple[tuple[float, ...], ...]
    noise_std: float = 1.0
    seed: int = 0
    initial: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if len(self.segment_lengths) != len(self.coefficients):
            raise ConfigError("need one coefficient vector per segment")
        if any(n < 1 for n in self.segment_lengths):
            raise ConfigError("segment lengths must be positive")
        if self.noise_std < 0:
            raise ConfigError("noise_std must be >= 0")
        if len(self.initial) > self.segment_lengths[0]:
            raise ConfigError("more initial values than the first segment holds")


def gen_break_series(config: BreakConfig) -> Series:
    """Concatenated AR segments; coefficients switch at segment boundaries."""
    for i, coef in enumerate(config.coefficients):
        r = companion_spectral_radius(coef)
        if r >= 1.0:
            raise UnstableSegment(f"segment {i} has companion spectral radius {r:.4f} >= 1")
    total = sum(config.segment_lengths)
    noise = make_rng(config.seed).standard_normal(total) * config.noise_std
    coefs = [np.asarray(c, dtype=float) for c in config.coefficients]
    segment = np.repeat(np.arange(len(coefs)), config.segment_lengths)
    s = np.zeros(total)
    s[:len(config.initial)] = config.initial
    for t in range(len(config.initial), total):
        a = coefs[segment[t]]
        lags = s[max(t - a.size, 0):t][::-1]
        s[t] = a[:lags.size] @ lags + noise[t]
    return Series("break_series", s)
