"""Residual and area under grid doubling for each ensemble case.

    python3 scripts/refinement_table.py --levels 3 --grid 128x64
"""

import argparse

from lagfill.cli import _grid
from lagfill.harness import CASES, case_gamma, compensate_area, gen_fourier_curve, refine_study


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cases", nargs="+", default=list(CASES))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--grid", type=_grid, default=(128, 64))
    args = ap.parse_args()
    print(f"{'case':<18}{'grid':>12}{'residual':>12}{'area':>14}{'mu':>10}")
    for case in args.cases:
        gamma = case_gamma(case)

        def source(n, gamma=gamma):
            c = gen_fourier_curve(args.seed, 6, 1.0, gamma, n)
            return c if gamma.has_complex else compensate_area(c, gamma)

        table = refine_study(gamma, source, args.levels, args.grid)
        for lv in table.levels:
            grid = f"{lv.grid[0]}x{lv.grid[1]}"
            print(f"{case:<18}{grid:>12}{lv.normalized_isotropy:>12.2e}{lv.area:>14.6f}{lv.mu_ratio:>10.4f}")
        slope = "at rounding floor" if table.at_floor else f"{table.residual_slope:.2f}"
        print(f"{case:<18} slope {slope}, last area change {table.area_rel_change:.2e}")


if __name__ == "__main__":
    main()
