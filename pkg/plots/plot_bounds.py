#!/usr/bin/env python3
"""Render the bound-comparison figure from a bounds CSV.

Three curves over n: gamma(alpha*n), gamma(n/2) and gamma(floor(n/2)+1).
"""
import argparse

import matplotlib.pyplot as plt

from figlib import fail_on_schema_error, read_csv


def render(in_path: str, out_path: str) -> None:
    rows = read_csv(in_path, "bounds")
    n = [int(r["n"]) for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(n, [float(r["gamma_half_n"]) for r in rows], "s-",
            label=r"$\gamma_{n/2}$", markersize=4)
    ax.plot(n, [float(r["gamma_alpha_n"]) for r in rows], "o-",
            label=r"$\gamma_{\alpha n}$", markersize=4)
    ax.plot(n, [float(r["gamma_floor_half_plus1"]) for r in rows], "^-",
            label=r"$\gamma_{\lfloor n/2\rfloor+1}$", markersize=4)
    ax.set_xlabel("n")
    ax.set_ylabel("bound")
    ax.set_title("Square-root error-factor bounds for small n")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="in_path", required=True,
                    help="bounds CSV from the bounds subcommand")
    ap.add_argument("--out", dest="out_path", required=True,
                    help="output image path")
    args = ap.parse_args()
    fail_on_schema_error(lambda: render(args.in_path, args.out_path))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
