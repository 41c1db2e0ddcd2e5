#!/usr/bin/env python3
"""Render accumulation histograms with the forecast density overlaid.

Reads the product-error histogram CSV and, optionally, the forecast CSV;
each algorithm's predicted log-normal density (parameters mu_Y, sigma_Y
reconstructed from the u-unit forecast columns) is drawn over its
histogram, scaled to the histogram's area.
"""
import argparse
import math

import matplotlib.pyplot as plt
import numpy as np

from figlib import U32, fail_on_schema_error, group_by, hist_arrays, read_csv


def _lognormal_density_u(err_u: np.ndarray, mu_y: float, sigma_y: float):
    """Density of (Y - 1)/u where Y is log-normal with mean/std mu_y, sigma_y."""
    var_ln = math.log1p((sigma_y / mu_y) ** 2)
    if var_ln == 0:
        return np.zeros_like(err_u)
    mu_ln = math.log(mu_y) - 0.5 * var_ln
    y = 1.0 + err_u * U32
    out = np.zeros_like(err_u)
    pos = y > 0
    yp = y[pos]
    out[pos] = (U32 / (yp * math.sqrt(2 * math.pi * var_ln))
                * np.exp(-((np.log(yp) - mu_ln) ** 2) / (2 * var_ln)))
    return out


def render(in_path: str, forecast_path: str, out_path: str) -> None:
    rows = read_csv(in_path, "hist")
    forecasts = {}
    if forecast_path:
        for r in read_csv(forecast_path, "forecast"):
            mu_y = 1.0 + float(r["forecast_avg_err"]) * U32
            sigma_y = float(r["forecast_std_err"]) * U32
            forecasts[r["algo"]] = (mu_y, sigma_y)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for algo, series in group_by(rows, "algo").items():
        lefts, rights, counts = hist_arrays(series)
        if not lefts:
            continue
        edges = np.array(lefts + [rights[-1]])
        line = ax.stairs(counts, edges, label=algo)
        if algo in forecasts:
            mu_y, sigma_y = forecasts[algo]
            xs = np.linspace(edges[0], edges[-1], 400)
            dens = _lognormal_density_u(xs, mu_y, sigma_y)
            area = float(np.sum(counts) * np.mean(np.diff(edges)))
            ax.plot(xs, dens * area, "--",
                    color=line.get_edgecolor(), alpha=0.9)
    ax.set_xlabel("product error (u units)")
    ax.set_ylabel("count")
    ax.set_title("Accumulated singular-value products vs forecast")
    if rows:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="in_path", required=True,
                    help="accumulation histogram CSV (accum2_hist.csv)")
    ap.add_argument("--forecast", default=None,
                    help="forecast CSV to overlay (accum2_forecast.csv)")
    ap.add_argument("--out", dest="out_path", required=True)
    args = ap.parse_args()
    fail_on_schema_error(
        lambda: render(args.in_path, args.forecast, args.out_path))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
