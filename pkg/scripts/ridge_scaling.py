"""Unscaled weight theta_1 against the input scale kappa, for both regularizers.

    python scripts/ridge_scaling.py [--seed S] [--samples N]

Writes results/ridge_scaling_l2.csv and results/ridge_scaling_invariant.csv.
"""
import argparse
import sys

from invreg.cli import main

KAPPAS = "0.1,0.2,0.5,1,2,5,10"

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", default="0")
    p.add_argument("--samples", default="10000")
    p.add_argument("--lambda", dest="lam", default="1")
    a = p.parse_args()
    code = 0
    for reg in ("l2", "invariant"):
        print(f"[{reg}]")
        code |= main(["ridge-scaling", "--regularizer", reg, "--kappas", KAPPAS, "--seed", a.seed,
                      "--samples", a.samples, "--lambda", a.lam, "--out", f"results/ridge_scaling_{reg}.csv"])
    sys.exit(code)
