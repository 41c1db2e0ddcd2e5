"""Random input pairs with uniform angles and log-uniform moduli.

Pairs ``(f, g)`` are drawn in polar form: angles ``theta`` and
``theta + phi`` with ``theta, phi`` uniform on ``[0, 2*pi)``, and moduli
``2**rho`` with ``rho`` uniform on a configurable exponent range.  The
default range keeps every sample inside the unscaled-safe region of the
generators.  Trigonometric values are evaluated in binary64 and rounded
to the working precision, then multiplied by the working-precision
modulus.

Streams come from the counter-based Philox generator.  Work is split into
fixed substreams: substream ``i`` of a scenario with seed ``s`` is keyed
by ``s ^ i``, so any partition of substreams onto workers yields the same
multiset of samples and, with ordered merging, identical results.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .precision import BINARY32, FpConstants

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ScenarioSpec:
    """Exponent ranges and sampling parameters for one experiment."""

    rho_f: tuple[float, float]
    rho_g: tuple[float, float]
    samples: int
    seed: int

    def __post_init__(self):
        for lo, hi in (self.rho_f, self.rho_g):
            if lo > hi:
                raise ValueError(f"rho range ({lo}, {hi}) has min > max")
        if self.samples < 0:
            raise ValueError("samples must be nonnegative")


def default_rho(consts: FpConstants = BINARY32) -> tuple[float, float]:
    """Largest symmetric exponent range that avoids all scaled paths.

    ``rho_max = (min(1 - exp_min, exp_max - 1) - digits + 1) / 2 - 1`` with
    the format's exponent bounds and precision; binary32 gives
    ``(-50.5, 50.5)``.
    """
    info = np.finfo(consts.real_dtype)
    # C-style min_exponent/max_exponent: smallest normal is 2**(min_exponent-1)
    min_exponent = info.minexp + 1
    max_exponent = info.maxexp
    digits = info.nmant + 1
    safmax_exp = min(1 - min_exponent, max_exponent - 1)
    rho_max = (safmax_exp - digits + 1) / 2.0 - 1.0
    return (-rho_max, rho_max)


def default_spec(samples: int, seed: int,
                 consts: FpConstants = BINARY32) -> ScenarioSpec:
    rho = default_rho(consts)
    return ScenarioSpec(rho_f=rho, rho_g=rho, samples=samples, seed=seed)


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for substream ``index`` of a seeded run."""
    return np.random.Generator(np.random.Philox(key=np.uint64(seed ^ index)))


def sample_batch(spec: ScenarioSpec, count: int,
                 rng: np.random.Generator,
                 consts: FpConstants = BINARY32):
    """Draw ``count`` pairs ``(f, g)`` from ``rng``."""
    rd = consts.real_dtype
    theta = rng.random(count) * TWO_PI
    phi = rng.random(count) * TWO_PI
    lo_f, hi_f = spec.rho_f
    lo_g, hi_g = spec.rho_g
    rho1 = lo_f + (hi_f - lo_f) * rng.random(count)
    rho2 = lo_g + (hi_g - lo_g) * rng.random(count)
    r1 = np.exp2(rho1).astype(rd)
    r2 = np.exp2(rho2).astype(rd)
    f = np.empty(count, dtype=consts.complex_dtype)
    g = np.empty(count, dtype=consts.complex_dtype)
    f.real = r1 * np.cos(theta).astype(rd)
    f.imag = r1 * np.sin(theta).astype(rd)
    g.real = r2 * np.cos(theta + phi).astype(rd)
    g.imag = r2 * np.sin(theta + phi).astype(rd)
    return f, g


def sample_pair(spec: ScenarioSpec, rng: np.random.Generator,
                consts: FpConstants = BINARY32):
    """Draw a single pair; the batched form is the workhorse."""
    f, g = sample_batch(spec, 1, rng, consts)
    return f[0], g[0]


# Table of (rho_f, rho_g) scenarios exercising unscaled and scaled paths.
DEFAULT_SCENARIOS_RESOURCE = "scenarios_default.csv"


def parse_scenario_line(line: str):
    parts = [p.strip() for p in line.split(",")]
    if len(parts) != 4:
        raise ValueError(f"expected 4 comma-separated values, got {line!r}")
    vals = [float(p) for p in parts]
    return (vals[0], vals[1]), (vals[2], vals[3])


def load_scenarios(path=None):
    """Scenario rows ``((rho_f_min, rho_f_max), (rho_g_min, rho_g_max))``.

    Reads the packaged default file when ``path`` is None.  Blank lines and
    ``#`` comments are skipped.
    """
    if path is None:
        text = (resources.files("givens.data") /
                DEFAULT_SCENARIOS_RESOURCE).read_text()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(parse_scenario_line(line))
    return rows
