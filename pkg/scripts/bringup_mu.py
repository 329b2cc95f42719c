"""Measure the construction's area/length^2 constant on random admissible curves.

Run once after changing any homotopy; copy the suggested values into
``lagfill/defaults.py`` and bump ``DEFAULTS_VERSION``.

    python3 scripts/bringup_mu.py --runs 100 --grid 1024x512 --out bringup.json
"""

import argparse
import json
import math
import time

from lagfill.cli import _grid
from lagfill.harness import estimate_mu

MARGIN = 1.25


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cases", nargs="+", default=["lagrangian", "wedge_lagrangian"])
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--grid", type=_grid, default=(1024, 512))
    ap.add_argument("--out")
    args = ap.parse_args()
    summary = {}
    for case in args.cases:
        t0 = time.perf_counter()
        rep = estimate_mu(case, args.runs, args.seed, args.grid)
        dt = time.perf_counter() - t0
        # round the margin-inflated maximum up to one decimal
        frozen = math.ceil(MARGIN * rep.mu_max * 10) / 10 if rep.mu_max is not None else None
        summary[case] = {
            "runs": args.runs,
            "failures": rep.failures,
            "mu_max": rep.mu_max,
            "mu_mean": rep.mu_mean,
            "mu_p95": rep.mu_p95,
            "max_residual": max((r.residual_norm for r in rep.records if r.residual_norm is not None), default=None),
            "suggested_frozen": frozen,
            "seconds": round(dt, 1),
        }
        print(case, json.dumps(summary[case]), flush=True)
    if args.out:
        with open(args.out, "w") as f:
            json.dump(summary, f, indent=2)


if __name__ == "__main__":
    main()
