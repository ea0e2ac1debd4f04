"""Command-line experiment harness.

Every command writes a CSV whose first line is ``# manifest_sha256=<hex>``,
followed by a header row, plus a sidecar ``<out>.manifest.json``. The hash
covers the manifest's deterministic keys (``command``, ``config``, ``seed``,
``version``); ``wall_clock_s``, ``timing`` and ``execution`` (worker count)
are excluded so that reruns produce byte-identical CSVs.

Exit codes: 0 success, 1 configuration error, 2 data or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import sys
import time
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .data import load_series_csv, load_sunspots
from .errors import ConfigError, DataError
from .experiments import (DEFAULT_LAMBDAS, OPTIMIZERS, PinvBenchConfig, RidgeScalingConfig, SunspotSweepConfig,
                          best_rows, online_predictions, run_pinv_bench, run_ridge_scaling, run_sunspot_sweep,
                          summarize)
from .models import ArSpec, ar_featurize

log = logging.getLogger("invreg")

DETERMINISTIC_KEYS = ("command", "config", "seed", "version")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def manifest_hash(manifest: dict) -> str:
    core = {k: manifest[k] for k in DETERMINISTIC_KEYS if k in manifest}
    return hashlib.sha256(json.dumps(core, sort_keys=True, default=str).encode()).hexdigest()


def write_results(out: Path, rows: Sequence[dict], manifest: dict) -> str:
    """Write ``rows`` to ``out`` and the manifest to ``out.manifest.json``; return the hash."""
    digest = manifest_hash(manifest)
    if not rows:
        raise DataError("no result rows to write")
    fields = list(rows[0])
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as fh:
        fh.write(f"# manifest_sha256={digest}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in fields])
    sidecar = out.with_name(out.name + ".manifest.json")
    sidecar.write_text(json.dumps({**manifest, "manifest_sha256": digest}, indent=2, default=str) + "\n")
    return digest


def _manifest(command: str, config: dict, seed, started: float, timing: dict | None = None) -> dict:
    config = dict(config)
    execution = {"jobs": config.pop("jobs", 1)}
    return {"command": command, "config": config, "seed": seed, "version": __version__,
            "wall_clock_s": time.perf_counter() - started, "timing": timing or {}, "execution": execution}


def _load(path: str | None, column) -> np.ndarray:
    if path is None:
        return load_sunspots().values
    col = int(column) if column is not None and column.lstrip("-").isdigit() else column
    return load_series_csv(path, col).values


def cmd_pinv_bench(args) -> int:
    started = time.perf_counter()
    cfg = PinvBenchConfig(ns=args.n, method=args.method, seed=args.seed, jobs=args.jobs)
    rows = run_pinv_bench(cfg)
    write_results(args.out, rows, _manifest("pinv-bench", asdict(cfg), cfg.seed, started))
    for n in cfg.ns:
        last = [r for r in rows if r["n"] == n][-1]
        errs = ", ".join(f"{m}={last[f'relative_error_{m}']:.3e}" for m in cfg.methods)
        print(f"n={n} final relative error: {errs}")
    return 0


def cmd_ridge_scaling(args) -> int:
    started = time.perf_counter()
    cfg = RidgeScalingConfig(kappas=args.kappas, lam=args.lam, samples=args.samples, seed=args.seed,
                             regularizer=args.regularizer)
    rows = run_ridge_scaling(cfg)
    write_results(args.out, rows, _manifest("ridge-scaling", asdict(cfg), cfg.seed, started))
    for r in rows:
        print(f"kappa={r['kappa']:g} theta0={r['theta0']:.6f} theta1={r['theta1']:.6f}")
    return 0


def cmd_sunspot_sweep(args) -> int:
    started = time.perf_counter()
    values = _load(args.data, args.column)
    cfg = SunspotSweepConfig(orders=args.orders, gamma=args.gamma, lambdas=args.lambdas,
                             regularizer=args.regularizer, lambda_scale=args.lambda_scale, jobs=args.jobs)
    rows = run_sunspot_sweep(values, cfg)
    config = {**asdict(cfg), "data": args.data or "<bundled sunspots>", "column": args.column}
    write_results(args.out, rows, _manifest("sunspot-sweep", config, None, started))
    for key in ("rmse", "rmse_skip_burnin"):
        for reg, r in best_rows(rows, key).items():
            print(f"best {key} {reg}: {r[key]:.4f} (order {r['order']}, lambda {r['lambda']:g})")
    return 0


def _reference_errors(path: Path) -> np.ndarray:
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows or "error" not in rows[0]:
        raise DataError(f"{path}: not a run-online CSV (no 'error' column)")
    col = rows[0].index("error")
    return np.array([float(r[col]) for r in rows[1:]])


def cmd_run_online(args) -> int:
    started = time.perf_counter()
    spec = ArSpec.parse(args.model)
    values = _load(args.data, args.column)
    obs = ar_featurize(values, spec)
    y = np.array([o.y for o in obs])
    hyper = {"lr": args.lr} if args.optimizer in ("adam", "adagrad", "rmsprop") else {}
    t0 = time.perf_counter()
    pred = online_predictions(obs, args.optimizer, args.regularizer, args.gamma, args.lam, **hyper)
    per_step = (time.perf_counter() - t0) / len(obs)
    err = pred - y

    ref = None
    if args.reference is not None:
        ref = _reference_errors(args.reference)
    elif args.reference_optimizer is not None:
        ref = online_predictions(obs, args.reference_optimizer, args.regularizer, args.gamma, args.lam) - y
    metrics = summarize(err, ref, skip=args.skip_burnin)

    config = {"data": args.data or "<bundled sunspots>", "column": args.column, "model": args.model,
              "regularizer": args.regularizer, "gamma": args.gamma, "lambda": args.lam,
              "optimizer": args.optimizer, "lr": args.lr, "skip_burnin": args.skip_burnin,
              "reference": str(args.reference) if args.reference else None,
              "reference_optimizer": args.reference_optimizer}
    rows = [{"step": i + 1, "prediction": p, "target": t, "error": e} for i, (p, t, e) in enumerate(zip(pred, y, err))]
    write_results(args.out, rows, _manifest("run-online", config, None, started, {"mean_step_s": per_step}))
    metrics_path = args.metrics_out or args.out.with_name(args.out.name + ".metrics.json")
    metrics_path.write_text(json.dumps(metrics, indent=2) + "\n")
    print(f"mse={metrics['mse']:.6g} rmse={metrics['rmse']:.6g} interval_mse_std={metrics['interval_mse_std']:.6g}")
    if "relative_mse" in metrics:
        print(f"relative_mse={metrics['relative_mse']:.6g} +/- {metrics['relative_mse_interval_std']:.3g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="invreg", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("pinv-bench", help="error accumulated by recursive pseudo-inverse updates")
    s.add_argument("--n", type=_ints, default=(32,), help="matrix order(s), comma-separated (default 32)")
    s.add_argument("--method", choices=("proposed", "baseline", "both"), default="both")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", type=Path, required=True)
    s.set_defaults(func=cmd_pinv_bench)

    s = sub.add_parser("ridge-scaling", help="fitted weight as one input is rescaled by 1/kappa")
    s.add_argument("--kappas", type=_floats, default=(0.1, 0.5, 1.0, 2.0, 10.0))
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--regularizer", choices=("l2", "invariant"), default="l2")
    s.add_argument("--out", type=Path, required=True)
    s.set_defaults(func=cmd_ridge_scaling)

    s = sub.add_parser(
        "sunspot-sweep", help="RMSE of online AR models over a lambda grid",
        description="For the l2 regularizer the effective coefficient is lambda/100 of each grid value, "
                    "so both regularizers share one lambda axis. --lambda-scale forgetting multiplies the "
                    "invariant coefficient by (1 - gamma).")
    s.add_argument("--orders", type=_ints, default=(2, 3, 4))
    s.add_argument("--gamma", type=float, default=0.99)
    s.add_argument("--lambdas", type=_floats, default=DEFAULT_LAMBDAS)
    s.add_argument("--regularizer", choices=("l2", "invariant", "both"), default="both")
    s.add_argument("--lambda-scale", choices=("raw", "forgetting"), default="raw")
    s.add_argument("--data", help="CSV file (default: bundled monthly sunspots 1749-1983)")
    s.add_argument("--column", help="value column index or header name")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", type=Path, required=True)
    s.set_defaults(func=cmd_sunspot_sweep)

    s = sub.add_parser("run-online", help="online one-step-ahead prediction on a series")
    s.add_argument("--data", help="CSV file (default: bundled monthly sunspots 1749-1983)")
    s.add_argument("--column", help="value column index or header name")
    s.add_argument("--model", default="ar:3", help="ar:<order>")
    s.add_argument("--regularizer", choices=("invariant", "l2"), default="invariant")
    s.add_argument("--gamma", type=float, default=0.99)
    s.add_argument("--lambda", dest="lam", type=float, default=0.0)
    s.add_argument("--optimizer", choices=OPTIMIZERS, default="second-order")
    s.add_argument("--lr", type=float, default=1e-3, help="step size for first-order optimizers")
    s.add_argument("--skip-burnin", type=int, default=0, help="drop this many initial steps from the metrics")
    s.add_argument("--reference", type=Path, help="earlier run-online CSV to compute relative MSE against")
    s.add_argument("--reference-optimizer", choices=OPTIMIZERS, help="compute the reference run in-process")
    s.add_argument("--metrics-out", type=Path)
    s.add_argument("--out", type=Path, required=True)
    s.set_defaults(func=cmd_run_online)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
