"""Shared plumbing for the figure scripts.

The scripts consume only the CSV files written by the ``givens`` CLI and
validate each file's header against the declared schema before rendering;
no numerical results originate here.  Error-valued columns are expressed
in units of the binary32 unit roundoff (u = 2**-24).
"""
from __future__ import annotations

import csv
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

U32 = 2.0 ** -24

SCHEMAS = {
    "bounds": "n,gamma_alpha_n,gamma_half_n,gamma_floor_half_plus1",
    "stats": "algo,metric,avg,std,avg_abs,std_abs,max_abs,count",
    "hist": "algo,metric,bin_left,bin_right,count",
    "heatmap": "log2_f,log2_g,sigma_err_avg",
    "bench": "scenario,algo,ns_per_call",
    "forecast": "algo,mu_x,sigma_x,M,forecast_avg_err,forecast_std_err",
}


class SchemaError(Exception):
    pass


@dataclass
class FigureSpec:
    """What to render: input CSVs, figure family, output image path."""

    family: str  # bounds | histogram | heatmap | accumulation
    inputs: dict
    output: str
    options: dict = field(default_factory=dict)


def read_csv(path: str, schema: str) -> list[dict]:
    """Rows of a CSV whose header must match ``SCHEMAS[schema]`` exactly."""
    expected = SCHEMAS[schema]
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header "
                              f"{expected!r}") from None
        if ",".join(header) != expected:
            raise SchemaError(f"{path}: header {','.join(header)!r} does not "
                              f"match schema {expected!r}")
        names = expected.split(",")
        return [dict(zip(names, row)) for row in reader if row]


def fail_on_schema_error(fn):
    """Run ``fn``; schema violations and I/O failures exit 1 with a message."""
    try:
        return fn()
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1)


def hist_arrays(rows):
    """Finite-bin edges and counts from histogram rows of one series.

    The ``-inf``/``inf`` overflow rows are dropped for drawing.
    """
    lefts, rights, counts = [], [], []
    for row in rows:
        if row["bin_left"] == "-inf" or row["bin_right"] == "inf":
            continue
        lefts.append(float(row["bin_left"]))
        rights.append(float(row["bin_right"]))
        counts.append(int(row["count"]))
    return lefts, rights, counts


def group_by(rows, key):
    groups: dict = {}
    for row in rows:
        groups.setdefault(row[key], []).append(row)
    return groups
