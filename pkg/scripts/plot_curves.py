#!/usr/bin/env python3
"""Render a benchmark aggregate.csv as a log-x error curve plot.

Usage: python scripts/plot_curves.py BENCH_DIR/aggregate.csv [out.png]

Plotting is optional tooling on top of the CSV contract; requires
matplotlib.
"""

import csv
import sys
from collections import defaultdict


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__, file=sys.stderr)
        return 2
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib is not installed; CSVs are the primary artifact",
              file=sys.stderr)
        return 1

    curves = defaultdict(lambda: ([], [], [], []))
    with open(sys.argv[1]) as fh:
        for row in csv.DictReader(fh):
            xs, ys, lo, hi = curves[row["solver"]]
            xs.append(float(row["median_train_kernel_evals"]))
            ys.append(float(row["median_test_zero_one"]))
            lo.append(float(row["q25_test_zero_one"]))
            hi.append(float(row["q75_test_zero_one"]))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for solver, (xs, ys, lo, hi) in sorted(curves.items()):
        ax.plot(xs, ys, marker="o", markersize=3, label=solver)
        ax.fill_between(xs, lo, hi, alpha=0.15)
    ax.set_xscale("log")
    ax.set_xlabel("kernel evaluations")
    ax.set_ylabel("test error (median, IQR band)")
    ax.legend()
    fig.tight_layout()
    out = sys.argv[2] if len(sys.argv) > 2 else "curves.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
