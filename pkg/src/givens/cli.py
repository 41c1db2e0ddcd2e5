"""Command-line front end writing the experiment CSV files.

Subcommands: ``bounds``, ``accuracy``, ``heatmap``, ``accum2``, ``accum3``
and ``bench``.  Identical invocations produce byte-identical CSV output,
and ``--threads`` changes only the scheduling, never the results.
Existing output files are only overwritten with ``--force``.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import errbounds, experiments
from .precision import BINARY32, BY_NAME
from .rotations import AlgorithmId, COMPLEX_ALGOS
from .sampling import ScenarioSpec, default_rho, load_scenarios

ALGO_CHOICES = [a.value for a in COMPLEX_ALGOS] + ["all"]


def _algo_list(name: str):
    if name == "all":
        return list(COMPLEX_ALGOS)
    return [AlgorithmId.parse(name)]


def _add_common(p, with_algo=True):
    if with_algo:
        p.add_argument("--algo", choices=ALGO_CHOICES, default="all",
                       help="complex algorithm to run (default: all)")
    p.add_argument("--seed", type=int, default=1,
                   help="base seed for the Philox substreams (default: 1)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker count; does not affect results (default: 1)")
    p.add_argument("--out", default="out",
                   help="output directory (default: ./out)")
    p.add_argument("--force", action="store_true",
                   help="overwrite existing output files")


def _add_rho(p):
    rho = default_rho(BINARY32)
    p.add_argument("--rho-f-min", type=float, default=rho[0])
    p.add_argument("--rho-f-max", type=float, default=rho[1])
    p.add_argument("--rho-g-min", type=float, default=rho[0])
    p.add_argument("--rho-g-max", type=float, default=rho[1])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="givens",
        description="Givens rotation accuracy experiments and bound tables")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="bound-comparison table and "
                                      "small-n criterion thresholds")
    p.add_argument("--precision", choices=sorted(BY_NAME), default="binary32")
    p.add_argument("--nmax", type=int, default=20,
                   help="table rows 1..nmax (default: 20)")
    _add_common(p, with_algo=False)

    p = sub.add_parser("accuracy", help="single-rotation accuracy statistics")
    p.add_argument("--samples", type=int, default=1_000_000)
    _add_rho(p)
    _add_common(p)

    p = sub.add_parser("heatmap", help="mean sigma error over a modulus grid")
    p.add_argument("--grid-points", type=int, default=25,
                   help="grid points per axis (default: 25)")
    p.add_argument("--samples-per-cell", type=int, default=256)
    _add_rho(p)
    _add_common(p)

    p = sub.add_parser("accum2", help="products of singular values "
                                      "and the log-normal forecast")
    p.add_argument("--M", type=int, default=10_000, dest="m",
                   help="rotations per product (default: 10000)")
    p.add_argument("--N", type=int, default=1_000, dest="n",
                   help="repetitions (default: 1000)")
    _add_common(p)

    p = sub.add_parser("accum3", help="3x3 accumulation: norm proxy "
                                      "and orthogonality drift")
    p.add_argument("--M", type=int, default=10_000, dest="m")
    p.add_argument("--N", type=int, default=200, dest="n")
    _add_common(p)

    p = sub.add_parser("bench", help="nanoseconds per call across scenarios")
    p.add_argument("--scenarios", default=None,
                   help="scenario file: rho_f_min,rho_f_max,rho_g_min,"
                        "rho_g_max per line (default: packaged table)")
    p.add_argument("--samples", type=int, default=100_000,
                   help="pre-generated pairs per scenario (default: 100000)")
    p.add_argument("--reps", type=int, default=3,
                   help="timed repetitions, best taken (default: 3)")
    _add_common(p, with_algo=False)
    return ap


def _prepare_out(args, names):
    os.makedirs(args.out, exist_ok=True)
    paths = {name: os.path.join(args.out, name) for name in names}
    if not args.force:
        clashes = [p for p in paths.values() if os.path.exists(p)]
        if clashes:
            raise FileExistsError(clashes[0])
    return paths


def _spec(args, samples):
    return ScenarioSpec(rho_f=(args.rho_f_min, args.rho_f_max),
                        rho_g=(args.rho_g_min, args.rho_g_max),
                        samples=samples, seed=args.seed)


def _cmd_bounds(args) -> int:
    consts = BY_NAME[args.precision]
    paths = _prepare_out(args, ["bounds.csv", "thresholds.csv"])
    with open(paths["bounds.csv"], "w", encoding="utf-8", newline="\n") as fh:
        for line in errbounds.small_n_table_csv(args.nmax, consts.u):
            fh.write(line + "\n")
    first_fail = errbounds.first_failing_n(consts.u)
    with open(paths["thresholds.csv"], "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("precision,first_failing_n,largest_n_before_failure\n")
        fh.write(f"{consts.name},{first_fail},{first_fail - 1}\n")
    return 0


def _cmd_accuracy(args) -> int:
    paths = _prepare_out(args, ["accuracy_stats.csv", "accuracy_hist.csv"])
    spec = _spec(args, args.samples)
    stats_rows = []
    hist_rows = []
    for i, algo in enumerate(_algo_list(args.algo)):
        res = experiments.run_single_accuracy(algo, spec,
                                              threads=args.threads)
        stats_rows.append((algo.value, "sigma_err", res.sigma_stats))
        stats_rows.append((algo.value, "backward_err", res.backward_stats))
        hist_rows.append((algo.value, "sigma_err", res.sigma_hist))
        hist_rows.append((algo.value, "backward_err", res.backward_hist))
        if i == 0:
            for metric, h in res.input_hists.items():
                hist_rows.append(("input", metric, h))
    experiments.write_stats_csv(paths["accuracy_stats.csv"], stats_rows)
    experiments.write_hist_csv(paths["accuracy_hist.csv"], hist_rows)
    return 0


def _cmd_heatmap(args) -> int:
    algos = _algo_list(args.algo)
    names = [f"heatmap_{a.value}.csv" for a in algos]
    paths = _prepare_out(args, names)
    log2_f = np.linspace(args.rho_f_min, args.rho_f_max, args.grid_points)
    log2_g = np.linspace(args.rho_g_min, args.rho_g_max, args.grid_points)
    for algo, name in zip(algos, names):
        grid = experiments.run_heatmap(algo, log2_f, log2_g,
                                       args.samples_per_cell, args.seed,
                                       threads=args.threads)
        experiments.write_heatmap_csv(paths[name], log2_f, log2_g, grid)
    return 0


def _cmd_accum2(args) -> int:
    paths = _prepare_out(args, ["accum2_stats.csv", "accum2_hist.csv",
                                "accum2_forecast.csv"])
    stats_rows, hist_rows, fc_rows = [], [], []
    for algo in _algo_list(args.algo):
        res = experiments.run_accum2(algo, args.m, args.n, args.seed,
                                     threads=args.threads)
        stats_rows.append((algo.value, "prod_sigma_err", res.stats))
        hist_rows.append((algo.value, "prod_sigma_err", res.hist))
        fc_rows.append((algo.value, res.forecast))
    experiments.write_stats_csv(paths["accum2_stats.csv"], stats_rows)
    experiments.write_hist_csv(paths["accum2_hist.csv"], hist_rows)
    experiments.write_forecast_csv(paths["accum2_forecast.csv"], fc_rows)
    return 0


def _cmd_accum3(args) -> int:
    paths = _prepare_out(args, ["accum3_stats.csv", "accum3_hist.csv"])
    stats_rows, hist_rows = [], []
    for algo in _algo_list(args.algo):
        res = experiments.run_accum3(algo, args.m, args.n, args.seed,
                                     threads=args.threads)
        for metric, st, h in (
                ("prod_sigma_err", res.prod_stats, res.prod_hist),
                ("norm_proxy_err", res.norm_stats, res.norm_hist),
                ("orthogonality", res.ortho_stats, res.ortho_hist)):
            stats_rows.append((algo.value, metric, st))
            hist_rows.append((algo.value, metric, h))
    experiments.write_stats_csv(paths["accum3_stats.csv"], stats_rows)
    experiments.write_hist_csv(paths["accum3_hist.csv"], hist_rows)
    return 0


def _cmd_bench(args) -> int:
    paths = _prepare_out(args, ["bench.csv"])
    scenarios = load_scenarios(args.scenarios)
    rows = experiments.run_bench(scenarios, args.samples, args.seed,
                                 reps=args.reps)
    experiments.write_bench_csv(paths["bench.csv"], rows)
    return 0


_COMMANDS = {
    "bounds": _cmd_bounds,
    "accuracy": _cmd_accuracy,
    "heatmap": _cmd_heatmap,
    "accum2": _cmd_accum2,
    "accum3": _cmd_accum3,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FileExistsError as exc:
        print(f"givens: output file exists (use --force): {exc}",
              file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"givens: I/O error on {getattr(exc, 'filename', '?')}: {exc}",
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
