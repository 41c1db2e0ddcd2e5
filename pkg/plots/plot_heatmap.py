#!/usr/bin/env python3
"""Render the sigma-error landscape over fixed moduli from a heatmap CSV.

Axes are log2(|f|) and log2(|g|); the color is the per-cell average of
(sigma - 1) in u units, on a symmetric diverging scale.
"""
import argparse

import matplotlib.pyplot as plt
import numpy as np

from figlib import fail_on_schema_error, read_csv


def render(in_path: str, out_path: str) -> None:
    rows = read_csv(in_path, "heatmap")
    xs = sorted({float(r["log2_f"]) for r in rows})
    ys = sorted({float(r["log2_g"]) for r in rows})
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    for r in rows:
        grid[yi[float(r["log2_g"])], xi[float(r["log2_f"])]] = \
            float(r["sigma_err_avg"])
    fig, ax = plt.subplots(figsize=(6.5, 5.5))
    vmax = np.nanmax(np.abs(grid)) if rows else 1.0
    vmax = vmax if vmax > 0 else 1.0
    im = ax.imshow(grid, origin="lower", aspect="auto", cmap="RdBu_r",
                   vmin=-vmax, vmax=vmax,
                   extent=(min(xs, default=0) - 0.5, max(xs, default=1) + 0.5,
                           min(ys, default=0) - 0.5, max(ys, default=1) + 0.5))
    fig.colorbar(im, ax=ax, label=r"avg($\sigma - 1$) (u units)")
    ax.set_xlabel(r"$\log_2 |f|$")
    ax.set_ylabel(r"$\log_2 |g|$")
    ax.set_title("Singular-value error over moduli")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="in_path", required=True,
                    help="heatmap CSV from the heatmap subcommand")
    ap.add_argument("--out", dest="out_path", required=True)
    args = ap.parse_args()
    fail_on_schema_error(lambda: render(args.in_path, args.out_path))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
