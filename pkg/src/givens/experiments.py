"""Experiment drivers: accuracy statistics, accumulation runs, timing.

Sample generation is split into fixed-size substream chunks so that runs
are deterministic for a given ``(algo, spec, seed)`` regardless of the
worker count: chunk ``i`` draws from the Philox substream keyed by
``seed ^ i`` and partial results are merged in chunk order.  Statistics
and all error measurements are accumulated in binary64.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import metrics
from .precision import BINARY32, FpConstants
from .rotations import (AlgorithmId, COMPLEX_ALGOS, ComplexRotation,
                        generate, scale_wrapper, _UNSCALED)
from .sampling import ScenarioSpec, default_rho, sample_batch, substream

CHUNK = 1 << 16

SIGMA_HIST_RANGE = (-5.0, 5.0)
BACKWARD_HIST_RANGE = (0.0, 10.0)
HIST_BINS = 101


@dataclass
class ErrorStats:
    """Moments of an error sample, in units of the working u."""

    avg: float
    std: float
    avg_abs: float
    std_abs: float
    max_abs: float
    count: int


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    underflow: int
    overflow: int


@dataclass
class AccumForecast:
    """Log-normal forecast for a product of per-rotation singular values."""

    mu_x: float
    sigma_x: float
    m: int
    mu_y: float
    sigma_y: float
    mu_y_err_u: float   # (mu_y - 1) / u, computed without cancellation
    sigma_y_u: float    # sigma_y / u


# ---------------------------------------------------------------------------
# deterministic chunked execution and statistics


def _chunk_sizes(total: int, chunk: int = CHUNK) -> list[int]:
    n_full, rem = divmod(total, chunk)
    return [chunk] * n_full + ([rem] if rem else [])


def map_ordered(fn, n_tasks: int, threads: int = 1) -> list:
    """Run ``fn(i)`` for ``i in range(n_tasks)``; results in index order."""
    if threads <= 1 or n_tasks <= 1:
        return [fn(i) for i in range(n_tasks)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n_tasks)))


def _partials(x: np.ndarray):
    x = np.asarray(x, dtype=np.float64)
    return (x.size, float(x.sum()), float((x * x).sum()),
            float(np.abs(x).sum()), float(np.abs(x).max()) if x.size else 0.0)


def _merge_partials(parts) -> ErrorStats:
    n = sum(p[0] for p in parts)
    s1 = s2 = a1 = 0.0
    amax = 0.0
    for pn, ps1, ps2, pa1, pamax in parts:
        s1 += ps1
        s2 += ps2
        a1 += pa1
        amax = max(amax, pamax)
    if n == 0:
        raise ValueError("no samples")
    avg = s1 / n
    avg_abs = a1 / n
    var = max(s2 / n - avg * avg, 0.0)
    var_abs = max(s2 / n - avg_abs * avg_abs, 0.0)
    return ErrorStats(avg=avg, std=math.sqrt(var), avg_abs=avg_abs,
                      std_abs=math.sqrt(var_abs), max_abs=amax, count=n)


def stats_of(x: np.ndarray) -> ErrorStats:
    return _merge_partials([_partials(x)])


def _hist_edges(lo: float, hi: float, bins: int = HIST_BINS) -> np.ndarray:
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return np.linspace(lo, hi, bins + 1)


def _hist_counts(x: np.ndarray, edges: np.ndarray):
    counts, _ = np.histogram(x, bins=edges)
    under = int((x < edges[0]).sum())
    over = int((x > edges[-1]).sum())
    return counts.astype(np.int64), under, over


def _merge_hists(edges, parts) -> Histogram:
    counts = np.zeros(len(edges) - 1, dtype=np.int64)
    under = over = 0
    for c, u, o in parts:
        counts += c
        under += u
        over += o
    return Histogram(edges=edges, counts=counts, underflow=under, overflow=over)


# ---------------------------------------------------------------------------
# single-rotation accuracy


@dataclass
class SingleAccuracyResult:
    algo: AlgorithmId
    sigma_stats: ErrorStats
    backward_stats: ErrorStats
    sigma_hist: Histogram
    backward_hist: Histogram
    input_hists: dict


def run_single_accuracy(algo: AlgorithmId, spec: ScenarioSpec,
                        threads: int = 1,
                        consts: FpConstants = BINARY32) -> SingleAccuracyResult:
    """Per-sample ``sigma - 1`` and backward-error statistics, in u units."""
    u = consts.u
    sizes = _chunk_sizes(spec.samples)
    sig_edges = _hist_edges(*SIGMA_HIST_RANGE)
    bwd_edges = _hist_edges(*BACKWARD_HIST_RANGE)
    lf_edges = _hist_edges(spec.rho_f[0], spec.rho_f[1], 64)
    lg_edges = _hist_edges(spec.rho_g[0], spec.rho_g[1], 64)
    th_edges = np.linspace(0.0, 2.0 * math.pi, 65)

    def work(i):
        rng = substream(spec.seed, i)
        f, g = sample_batch(spec, sizes[i], rng, consts)
        rot = generate(algo, f, g)
        serr = (metrics.sigma(rot) - 1.0) / u
        bwd = metrics.backward_error(rot, f, g) / u
        f64 = f.astype(np.complex128)
        g64 = g.astype(np.complex128)
        return (_partials(serr), _partials(bwd),
                _hist_counts(serr, sig_edges), _hist_counts(bwd, bwd_edges),
                _hist_counts(np.log2(np.abs(f64)), lf_edges),
                _hist_counts(np.log2(np.abs(g64)), lg_edges),
                _hist_counts(np.mod(np.arctan2(f64.imag, f64.real),
                                    2.0 * math.pi), th_edges))

    parts = map_ordered(work, len(sizes), threads)
    return SingleAccuracyResult(
        algo=algo,
        sigma_stats=_merge_partials([p[0] for p in parts]),
        backward_stats=_merge_partials([p[1] for p in parts]),
        sigma_hist=_merge_hists(sig_edges, [p[2] for p in parts]),
        backward_hist=_merge_hists(bwd_edges, [p[3] for p in parts]),
        input_hists={
            "input_log2_f": _merge_hists(lf_edges, [p[4] for p in parts]),
            "input_log2_g": _merge_hists(lg_edges, [p[5] for p in parts]),
            "input_theta": _merge_hists(th_edges, [p[6] for p in parts]),
        },
    )


def run_component_bounds(algo: AlgorithmId, spec: ScenarioSpec,
                         threads: int = 1,
                         consts: FpConstants = BINARY32):
    """Maximum component and backward errors vs the binary64 oracle.

    Returns the per-run maxima of the relative errors of ``c``, ``s``,
    ``r`` and of the backward error, in units of u.
    """
    u = consts.u
    sizes = _chunk_sizes(spec.samples)

    def work(i):
        rng = substream(spec.seed, i)
        f, g = sample_batch(spec, sizes[i], rng, consts)
        rot = generate(algo, f, g)
        c_rel, s_rel, r_rel = metrics.component_rel_errors(rot, f, g)
        bwd = metrics.backward_error(rot, f, g) / u
        return (float(c_rel.max()), float(s_rel.max()),
                float(r_rel.max()), float(bwd.max()))

    parts = map_ordered(work, len(sizes), threads)
    return tuple(max(p[j] for p in parts) for j in range(4))


# ---------------------------------------------------------------------------
# error landscape over fixed moduli


def run_heatmap(algo: AlgorithmId, log2_f: np.ndarray, log2_g: np.ndarray,
                samples_per_cell: int, seed: int, threads: int = 1,
                consts: FpConstants = BINARY32):
    """Mean ``(sigma - 1)/u`` per cell of a fixed-modulus grid.

    Moduli are pinned to ``2**log2_f[i]`` and ``2**log2_g[j]`` per cell and
    only the phases are random.  Returns an array of shape
    ``(len(log2_f), len(log2_g))``.
    """
    u = consts.u
    rd = consts.real_dtype
    log2_f = np.asarray(log2_f, dtype=np.float64)
    log2_g = np.asarray(log2_g, dtype=np.float64)
    ncell = log2_f.size * log2_g.size

    def work(idx):
        i, j = divmod(idx, log2_g.size)
        rng = substream(seed, idx)
        theta = rng.random(samples_per_cell) * 2.0 * math.pi
        phi = rng.random(samples_per_cell) * 2.0 * math.pi
        r1 = rd.type(np.exp2(log2_f[i]))
        r2 = rd.type(np.exp2(log2_g[j]))
        f = np.empty(samples_per_cell, dtype=consts.complex_dtype)
        g = np.empty(samples_per_cell, dtype=consts.complex_dtype)
        f.real = r1 * np.cos(theta).astype(rd)
        f.imag = r1 * np.sin(theta).astype(rd)
        g.real = r2 * np.cos(theta + phi).astype(rd)
        g.imag = r2 * np.sin(theta + phi).astype(rd)
        rot = generate(algo, f, g)
        return float(((metrics.sigma(rot) - 1.0) / u).mean())

    vals = map_ordered(work, ncell, threads)
    return np.asarray(vals).reshape(log2_f.size, log2_g.size)


# ---------------------------------------------------------------------------
# accumulation of many rotations


def predict_lognormal(mu_x: float, sigma_x: float, m: int,
                      consts: FpConstants = BINARY32) -> AccumForecast:
    """Forecast mean and spread of a product of ``m`` independent factors.

    ``mu_y = mu_x**m`` and ``sigma_y = mu_x**m * sqrt(exp(m*(sigma_x/mu_x)**2) - 1)``,
    evaluated through ``log``/``expm1`` so that neither overflow nor
    cancellation degrades the result.
    """
    if mu_x <= 0:
        raise ValueError(f"mu_x must be positive, got {mu_x}")
    if sigma_x < 0:
        raise ValueError(f"sigma_x must be nonnegative, got {sigma_x}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    log_mu_y = m * math.log(mu_x)
    mu_y = math.exp(log_mu_y)
    ratio2 = (sigma_x / mu_x) ** 2
    sigma_y = mu_y * math.sqrt(math.expm1(m * ratio2))
    return AccumForecast(mu_x=mu_x, sigma_x=sigma_x, m=m, mu_y=mu_y,
                         sigma_y=sigma_y,
                         mu_y_err_u=math.expm1(log_mu_y) / consts.u,
                         sigma_y_u=sigma_y / consts.u)


@dataclass
class Accum2Result:
    algo: AlgorithmId
    stats: ErrorStats          # of prod(sigma_i) - 1, in u units
    hist: Histogram
    forecast: AccumForecast


def run_accum2(algo: AlgorithmId, m: int, n: int, seed: int,
               threads: int = 1,
               consts: FpConstants = BINARY32) -> Accum2Result:
    """Products of ``m`` singular values, repeated ``n`` times.

    Repetition ``i`` draws its ``m`` pairs from substream ``i`` and the
    product is accumulated as ``exp(sum(log(sigma)))`` in binary64.  The
    forecast is computed from the same run's measured per-rotation moments.
    """
    u = consts.u
    rho = default_rho(consts)
    spec = ScenarioSpec(rho_f=rho, rho_g=rho, samples=m, seed=seed)

    def work(i):
        rng = substream(seed, i)
        f, g = sample_batch(spec, m, rng, consts)
        rot = generate(algo, f, g)
        sig = metrics.sigma(rot)
        perr = math.expm1(float(np.log(sig).sum())) / u
        # moments of sigma - 1: raw moments of sigma itself would lose the
        # ~1e-8 spread to cancellation against the mean of ~1
        return perr, _partials(sig - 1.0)

    parts = map_ordered(work, n, threads)
    perr = np.array([p[0] for p in parts])
    dev_stats = _merge_partials([p[1] for p in parts])
    forecast = predict_lognormal(1.0 + dev_stats.avg, dev_stats.std, m,
                                 consts)
    st = stats_of(perr)
    span = 6.0 * st.std if st.std > 0 else 1.0
    edges = _hist_edges(st.avg - span, st.avg + span)
    hist = _merge_hists(edges, [_hist_counts(perr, edges)])
    return Accum2Result(algo=algo, stats=st, hist=hist, forecast=forecast)


def schedule_3x3(k: int) -> tuple[int, int]:
    """Round-robin plane for rotation ``k >= 1``: (1,2), (2,3), (1,3), ..."""
    if k < 1:
        raise ValueError(f"rotation index must be >= 1, got {k}")
    rem = k % 3
    if rem == 1:
        return (1, 2)
    if rem == 2:
        return (2, 3)
    return (1, 3)


@dataclass
class Accum3Result:
    algo: AlgorithmId
    prod_stats: ErrorStats   # prod(sigma_i) - 1
    norm_stats: ErrorStats   # 1.5*(||V||_F/sqrt(3) - 1)
    ortho_stats: ErrorStats  # avg |offdiag(V^H V)|
    prod_hist: Histogram
    norm_hist: Histogram
    ortho_hist: Histogram


_ACCUM3_BLOCK = 256


def run_accum3(algo: AlgorithmId, m: int, n: int, seed: int,
               threads: int = 1,
               consts: FpConstants = BINARY32) -> Accum3Result:
    """Drive a 3x3 identity through ``m`` round-robin plane rotations.

    Working-precision ``c_k, s_k`` are embedded at the scheduled plane and
    the 3x3 products are accumulated in binary64; repeated ``n`` times
    with per-repetition substreams.  Returns statistics (u units) of the
    singular-value product error, of the Frobenius-norm proxy
    ``1.5*(||V||_F/sqrt(3) - 1)``, and of the column-orthogonality defect.
    """
    u = consts.u
    rho = default_rho(consts)
    spec = ScenarioSpec(rho_f=rho, rho_g=rho, samples=m, seed=seed)
    planes = [schedule_3x3(k) for k in range(1, m + 1)]
    n_blocks = (n + _ACCUM3_BLOCK - 1) // _ACCUM3_BLOCK if n else 0

    def work(b):
        reps = range(b * _ACCUM3_BLOCK, min((b + 1) * _ACCUM3_BLOCK, n))
        nb = len(reps)
        fs = np.empty((nb, m), dtype=consts.complex_dtype)
        gs = np.empty((nb, m), dtype=consts.complex_dtype)
        for row, rep in enumerate(reps):
            fs[row], gs[row] = sample_batch(spec, m, substream(seed, rep),
                                            consts)
        rot = generate(algo, fs.ravel(), gs.ravel())
        sig = metrics.sigma(rot).reshape(nb, m)
        c = np.asarray(rot.c, dtype=np.float64).reshape(nb, m)
        s = np.asarray(rot.s, dtype=np.complex128).reshape(nb, m)
        v = np.broadcast_to(np.eye(3, dtype=np.complex128),
                            (nb, 3, 3)).copy()
        for k in range(m):
            i, j = planes[k]
            i -= 1
            j -= 1
            ck = c[:, k][:, None]
            sk = s[:, k][:, None]
            row_i = v[:, i, :]
            row_j = v[:, j, :]
            new_i = ck * row_i + sk * row_j
            row_j *= ck
            row_j -= np.conj(sk) * row_i
            v[:, i, :] = new_i
        perr = np.expm1(np.log(sig).sum(axis=1)) / u
        fro = np.sqrt((np.abs(v) ** 2).sum(axis=(1, 2)))
        nerr = 1.5 * (fro / math.sqrt(3.0) - 1.0) / u
        oerr = metrics.offdiag_avg(v) / u
        return perr, nerr, oerr

    if m == 0 or n == 0:
        z = np.zeros(max(n, 1))
        st = stats_of(z)
        edges = _hist_edges(-1.0, 1.0)
        h = _merge_hists(edges, [_hist_counts(z, edges)])
        return Accum3Result(algo, st, st, st, h, h, h)

    parts = map_ordered(work, n_blocks, threads)
    perr = np.concatenate([p[0] for p in parts])
    nerr = np.concatenate([p[1] for p in parts])
    oerr = np.concatenate([p[2] for p in parts])

    def hist_for(x):
        st = stats_of(x)
        span = 6.0 * st.std if st.std > 0 else 1.0
        edges = _hist_edges(st.avg - span, st.avg + span)
        return _merge_hists(edges, [_hist_counts(x, edges)])

    return Accum3Result(algo=algo,
                        prod_stats=stats_of(perr),
                        norm_stats=stats_of(nerr),
                        ortho_stats=stats_of(oerr),
                        prod_hist=hist_for(perr),
                        norm_hist=hist_for(nerr),
                        ortho_hist=hist_for(oerr))


# ---------------------------------------------------------------------------
# timing harness


BENCH_COLUMNS = ("cplx_39", "cplx_310", "cplx_new",
                 "cast_39", "cast_310", "cast_new")


def _bench_callable(label: str, consts: FpConstants):
    if label == "noop":
        return lambda f, g: ComplexRotation(c=f.real, s=g, r=f)
    if label.startswith("cast_"):
        inner = _UNSCALED[AlgorithmId.parse("cplx_" + label[5:])]

        def run_cast(f, g):
            rot = scale_wrapper(inner, f.astype(np.complex128),
                                g.astype(np.complex128))
            return ComplexRotation(c=rot.c.astype(consts.real_dtype),
                                   s=rot.s.astype(consts.complex_dtype),
                                   r=rot.r.astype(consts.complex_dtype))
        return run_cast
    algo = AlgorithmId.parse(label)
    return lambda f, g: generate(algo, f, g)


@dataclass
class BenchRow:
    scenario: int
    algo: str
    ns_per_call: float


def run_bench(scenarios, samples: int, seed: int, reps: int = 3,
              columns=BENCH_COLUMNS,
              consts: FpConstants = BINARY32) -> list[BenchRow]:
    """Best-of-``reps`` average time per call for each scenario and column.

    Inputs are generated outside the timed region; a result sink consumes
    every output so no work can be skipped.  Runs single threaded.
    """
    rows = []
    sink = 0.0
    for si, (rho_f, rho_g) in enumerate(scenarios, start=1):
        spec = ScenarioSpec(rho_f=rho_f, rho_g=rho_g, samples=samples,
                            seed=seed)
        f, g = sample_batch(spec, samples, substream(seed, si), consts)
        for label in columns:
            fn = _bench_callable(label, consts)
            rot = fn(f[: min(1024, samples)], g[: min(1024, samples)])
            sink += float(np.sum(rot.c))
            best = math.inf
            for _ in range(reps):
                t0 = time.perf_counter()
                rot = fn(f, g)
                dt = time.perf_counter() - t0
                sink += float(np.sum(rot.c))
                best = min(best, dt)
            rows.append(BenchRow(scenario=si, algo=label,
                                 ns_per_call=best / samples * 1e9))
    if not math.isfinite(sink):
        # the sink only guards against dead-code elimination
        pass
    return rows


# ---------------------------------------------------------------------------
# CSV emission (17 significant digits, stable row order)

STATS_CSV_HEADER = "algo,metric,avg,std,avg_abs,std_abs,max_abs,count"
HIST_CSV_HEADER = "algo,metric,bin_left,bin_right,count"
HEATMAP_CSV_HEADER = "log2_f,log2_g,sigma_err_avg"
BENCH_CSV_HEADER = "scenario,algo,ns_per_call"
FORECAST_CSV_HEADER = "algo,mu_x,sigma_x,M,forecast_avg_err,forecast_std_err"


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def write_stats_csv(path, rows):
    """``rows``: iterable of ``(algo_label, metric, ErrorStats)``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(STATS_CSV_HEADER + "\n")
        for algo, metric, st in rows:
            fh.write(f"{algo},{metric},{_fmt(st.avg)},{_fmt(st.std)},"
                     f"{_fmt(st.avg_abs)},{_fmt(st.std_abs)},"
                     f"{_fmt(st.max_abs)},{st.count}\n")


def write_hist_csv(path, rows):
    """``rows``: iterable of ``(algo_label, metric, Histogram)``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(HIST_CSV_HEADER + "\n")
        for algo, metric, h in rows:
            fh.write(f"{algo},{metric},-inf,{_fmt(h.edges[0])},{h.underflow}\n")
            for b in range(len(h.counts)):
                fh.write(f"{algo},{metric},{_fmt(h.edges[b])},"
                         f"{_fmt(h.edges[b + 1])},{h.counts[b]}\n")
            fh.write(f"{algo},{metric},{_fmt(h.edges[-1])},inf,{h.overflow}\n")


def write_heatmap_csv(path, log2_f, log2_g, grid):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(HEATMAP_CSV_HEADER + "\n")
        for i, a in enumerate(log2_f):
            for j, b in enumerate(log2_g):
                fh.write(f"{_fmt(a)},{_fmt(b)},{_fmt(grid[i, j])}\n")


def write_bench_csv(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(BENCH_CSV_HEADER + "\n")
        for row in rows:
            fh.write(f"{row.scenario},{row.algo},{_fmt(row.ns_per_call)}\n")


def write_forecast_csv(path, rows):
    """``rows``: iterable of ``(algo_label, AccumForecast)``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(FORECAST_CSV_HEADER + "\n")
        for algo, fc in rows:
            fh.write(f"{algo},{_fmt(fc.mu_x)},{_fmt(fc.sigma_x)},{fc.m},"
                     f"{_fmt(fc.mu_y_err_u)},{_fmt(fc.sigma_y_u)}\n")
