"""RMSE of online AR(2..4) predictions on the bundled sunspot series over a lambda grid.

    python scripts/sunspot_sweep.py [--lambda-scale forgetting] [--jobs 4]

Extra arguments are passed to ``invreg sunspot-sweep``.
"""
import sys

from invreg.cli import main

if __name__ == "__main__":
    args = sys.argv[1:]
    if "--out" not in args:
        scale = args[args.index("--lambda-scale") + 1] if "--lambda-scale" in args else "raw"
        args += ["--out", f"results/sunspot_sweep_{scale}.csv"]
    sys.exit(main(["sunspot-sweep", *args]))
