"""Swept area of the planar contraction on figure-eight loops.

Compares the measured area with 2 L^2 and with the estimate 4 R L, where
R = max |w| and L is the loop length.  Prints one JSON line per loop.

    python3 scripts/contraction_check.py --samples 2048 --rows 1024
"""

import argparse
import json

import numpy as np

from lagfill.curves import Curve, length
from lagfill.homotopies import contract_planar_zero_area_loop


def figure_eight(n: int, rho: float, ratio: float) -> Curve:
    """Two circles in z1 touching at the origin, opposite senses, equal areas.

    ``ratio`` stretches both lobes into ellipses (x semi-axis rho * ratio,
    y semi-axis rho / ratio) so the enclosed areas still cancel.
    """
    half = n // 2
    th = 2 * np.pi * np.arange(half + 1) / half
    a, b = rho * ratio, rho / ratio
    left = np.column_stack([a * (np.cos(th) - 1), b * np.sin(th)])
    right = np.column_stack([a * (1 - np.cos(th)), b * np.sin(th)])
    xy = np.vstack([left, right[1:]])
    pts = np.zeros((len(xy), 4))
    pts[:, :2] = xy
    pts[half] = pts[0] = pts[-1] = 0.0
    return Curve(pts, np.linspace(0, 1, len(pts)), True)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=2048)
    ap.add_argument("--rows", type=int, default=1024)
    args = ap.parse_args()
    for ratio in (1.0, 2.0, 4.0):
        w = figure_eight(args.samples, 1.0, ratio)
        h = contract_planar_zero_area_loop(w, args.rows)
        lw = length(w)
        r = float(np.linalg.norm(w.points, axis=1).max())
        area = h.swept_area
        print(json.dumps({
            "ratio": ratio,
            "length": lw,
            "R": r,
            "area": area,
            "area_over_L2": area / lw**2,
            "area_over_4RL": area / (4 * r * lw),
            "stages": h.stage_areas(),
        }))


if __name__ == "__main__":
    main()
