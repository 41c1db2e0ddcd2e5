#!/usr/bin/env python3
"""Render overlaid per-series histograms from a histogram CSV.

Works for the error histograms (metric sigma_err or backward_err) and for
the input-distribution checks (metrics input_log2_f, input_log2_g,
input_theta).  Series sharing the metric are overlaid as step outlines.
"""
import argparse

import matplotlib.pyplot as plt

from figlib import fail_on_schema_error, group_by, hist_arrays, read_csv


def render(in_path: str, metric: str, out_path: str) -> None:
    rows = [r for r in read_csv(in_path, "hist") if r["metric"] == metric]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for algo, series in group_by(rows, "algo").items():
        lefts, rights, counts = hist_arrays(series)
        if lefts:
            edges = lefts + [rights[-1]]
            ax.stairs(counts, edges, label=algo)
    ax.set_xlabel(f"{metric} (u units)" if "err" in metric else metric)
    ax.set_ylabel("count")
    ax.set_title(f"Histogram of {metric}")
    if rows:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="in_path", required=True,
                    help="histogram CSV (accuracy_hist.csv etc.)")
    ap.add_argument("--metric", default="sigma_err",
                    help="metric column value to plot (default: sigma_err)")
    ap.add_argument("--out", dest="out_path", required=True)
    args = ap.parse_args()
    fail_on_schema_error(
        lambda: render(args.in_path, args.metric, args.out_path))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
