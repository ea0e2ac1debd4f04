"""Online AR(2) prediction on a synthetic series with structural breaks.

Compares the second-order learner (invariant and L2 regularization) with
Adam, AdaGrad and RMSProp, reporting MSE relative to the naive last-value
predictor. Segment coefficients flip sign at each break.

    python scripts/structural_breaks.py [--seed S] [--gamma G] [--lam L]
"""
import argparse
import csv
from pathlib import Path

import numpy as np

from invreg.data import BreakConfig, gen_break_series
from invreg.experiments import online_predictions, summarize
from invreg.models import ArSpec, ar_featurize

SEGMENTS = (2000, 2000, 2000)
COEFS = ((0.6, 0.2), (-0.6, 0.2), (0.5, -0.3))

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", type=float, default=0.99)
    p.add_argument("--lam", type=float, default=0.01)
    p.add_argument("--out", type=Path, default=Path("results/structural_breaks.csv"))
    a = p.parse_args()

    series = gen_break_series(BreakConfig(SEGMENTS, COEFS, noise_std=1.0, seed=a.seed))
    obs = ar_featurize(series.values, ArSpec(2))
    y = np.array([o.y for o in obs])
    naive = online_predictions(obs, "naive") - y
    runs = [("second-order", "invariant"), ("second-order", "l2"), ("adam", "invariant"),
            ("adagrad", "invariant"), ("rmsprop", "invariant")]
    rows = []
    for opt, reg in runs:
        hyper = {} if opt == "second-order" else {"lr": 1e-2}
        err = online_predictions(obs, opt, reg, a.gamma, a.lam, **hyper) - y
        m = summarize(err, naive, skip=3)
        rows.append({"optimizer": opt, "regularizer": reg if opt == "second-order" else "",
                     "mse": m["mse"], "relative_mse": m["relative_mse"],
                     "relative_mse_interval_std": m["relative_mse_interval_std"]})
        print(f"{opt:>12} {rows[-1]['regularizer']:>9}  relative MSE {m['relative_mse']:.4f} "
              f"+/- {m['relative_mse_interval_std']:.4f}")
    a.out.parent.mkdir(parents=True, exist_ok=True)
    with a.out.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
