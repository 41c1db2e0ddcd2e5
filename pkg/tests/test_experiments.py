"""Tests for the experiment drivers."""
import math

import numpy as np
import pytest

from givens import experiments as xp
from givens import metrics
from givens.precision import BINARY32
from givens.rotations import AlgorithmId, generate
from givens.sampling import default_spec, load_scenarios, sample_batch, substream

U = BINARY32.u


class TestSchedule:
    def test_first_cycle(self):
        assert xp.schedule_3x3(1) == (1, 2)
        assert xp.schedule_3x3(2) == (2, 3)
        assert xp.schedule_3x3(3) == (1, 3)

    def test_periodicity(self):
        assert xp.schedule_3x3(4) == (1, 2)
        for k in range(1, 300):
            assert xp.schedule_3x3(k) == xp.schedule_3x3(k + 3)

    def test_each_row_twice_per_cycle(self):
        for start in range(1, 10):
            hits = {1: 0, 2: 0, 3: 0}
            for k in range(start, start + 3):
                i, j = xp.schedule_3x3(k)
                hits[i] += 1
                hits[j] += 1
            assert hits == {1: 2, 2: 2, 3: 2}

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            xp.schedule_3x3(0)


class TestPredictLognormal:
    def test_zero_spread(self):
        fc = xp.predict_lognormal(1.0 + 1e-9, 0.0, 1000)
        assert fc.sigma_y == 0.0
        assert fc.mu_y == pytest.approx((1.0 + 1e-9) ** 1000, rel=1e-12)

    def test_unit_mean(self):
        fc = xp.predict_lognormal(1.0, 1e-8, 12345)
        assert fc.mu_y == 1.0

    def test_m_equal_one_is_identity_on_mu(self):
        mu = 1.0 + 3.7e-9
        fc = xp.predict_lognormal(mu, 5e-8, 1)
        assert fc.mu_y == mu

    def test_published_operating_point(self):
        # mu_X = 1 + 3.29e-2*u, sigma_X = 7.08e-1*u, M = 1e5 (binary32 u):
        # independent 60-digit evaluation gives 3290.32 and 223.93
        fc = xp.predict_lognormal(1.0 + 3.29e-2 * U, 7.08e-1 * U, 10 ** 5)
        assert fc.mu_y_err_u == pytest.approx(3290.322601, rel=1e-6)
        assert fc.sigma_y_u == pytest.approx(223.933167, rel=1e-6)

    def test_domain(self):
        with pytest.raises(ValueError):
            xp.predict_lognormal(0.0, 1.0, 10)
        with pytest.raises(ValueError):
            xp.predict_lognormal(1.0, -1.0, 10)
        with pytest.raises(ValueError):
            xp.predict_lognormal(1.0, 1.0, 0)


class TestStatsMachinery:
    def test_single_sample(self):
        st = xp.stats_of(np.array([2.5]))
        assert st.avg == 2.5 and st.std == 0.0
        assert st.avg_abs == 2.5 and st.max_abs == 2.5 and st.count == 1

    def test_merge_matches_whole(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=10_000)
        whole = xp.stats_of(x)
        merged = xp._merge_partials([xp._partials(x[:3000]),
                                     xp._partials(x[3000:])])
        assert merged.avg == pytest.approx(whole.avg, abs=1e-15)
        assert merged.std == pytest.approx(whole.std, rel=1e-12)
        assert merged.max_abs == whole.max_abs
        assert merged.count == whole.count

    def test_invariants(self):
        rng = np.random.default_rng(1)
        st = xp.stats_of(rng.normal(size=1000))
        assert st.std >= 0
        assert st.max_abs >= st.avg_abs >= 0


class TestSingleAccuracy:
    def test_single_sample_degenerate(self):
        spec = default_spec(1, 3)
        res = xp.run_single_accuracy(AlgorithmId.CplxNew, spec)
        assert res.sigma_stats.count == 1
        assert res.sigma_stats.std == 0.0
        assert res.sigma_stats.avg_abs == res.sigma_stats.max_abs

    def test_threads_do_not_change_results(self):
        spec = default_spec(150_000, 5)
        a = xp.run_single_accuracy(AlgorithmId.Cplx39, spec, threads=1)
        b = xp.run_single_accuracy(AlgorithmId.Cplx39, spec, threads=8)
        assert a.sigma_stats == b.sigma_stats
        assert a.backward_stats == b.backward_stats
        assert np.array_equal(a.sigma_hist.counts, b.sigma_hist.counts)

    def test_histogram_totals(self):
        spec = default_spec(50_000, 6)
        res = xp.run_single_accuracy(AlgorithmId.CplxNew, spec)
        h = res.sigma_hist
        assert h.counts.sum() + h.underflow + h.overflow == 50_000


class TestHeatmap:
    def test_dominant_f_small_errors(self):
        # |f| >> |g|: tiny averaged errors.  Near modulus ratios of
        # 2**12-2**13 an inherent quantization bias of up to +0.5u appears
        # for every algorithm (the best representable c rounds to 1), so
        # "much greater" here means ratios of 2**20 and beyond.
        cells = [(0.0, -20.0), (10.0, -15.0), (20.0, -10.0), (-10.0, -40.0)]
        for algo in (AlgorithmId.Cplx39, AlgorithmId.CplxNew):
            for a, b in cells:
                grid = xp.run_heatmap(algo, [a], [b], 2000, 9)
                assert abs(grid[0, 0]) <= 0.1

    def test_v310_low_accuracy_region(self):
        # |f|^2 below rtmin engages the two-sqrt fallback of the 3.10
        # strategy: averaged error exceeds 0.1u while the 3.9 strategy
        # stays near zero on the same cells
        for a, b in [(-40.0, -50.0), (-36.0, -46.0)]:
            g310 = xp.run_heatmap(AlgorithmId.Cplx310, [a], [b], 4000, 9)
            g39 = xp.run_heatmap(AlgorithmId.Cplx39, [a], [b], 4000, 9)
            assert abs(g310[0, 0]) > 0.1
            assert abs(g39[0, 0]) <= 0.1

    def test_single_cell_consistency(self):
        grid = xp.run_heatmap(AlgorithmId.CplxNew, [0.0], [0.0], 2000, 10)
        assert np.isfinite(grid).all()
        assert abs(grid[0, 0]) < 5.0


class TestAccum2:
    def test_m_equal_one_matches_single_rotation_stats(self):
        res = xp.run_accum2(AlgorithmId.CplxNew, m=1, n=4000, seed=11)
        assert res.forecast.mu_y == res.forecast.mu_x
        # each repetition's product is a single sigma: stats agree with the
        # per-rotation sigma statistics up to expm1/log roundoff
        assert res.stats.avg == pytest.approx(
            (res.forecast.mu_x - 1.0) / U, abs=1e-6)

    def test_log_domain_accumulation_matches_naive(self):
        f, g = sample_batch(default_spec(10_000, 12), 10_000, substream(12, 0))
        sig = metrics.sigma(generate(AlgorithmId.Cplx39, f, g))
        log_prod = math.exp(float(np.log(sig).sum()))
        naive = float(np.multiply.reduce(sig))
        assert abs(log_prod - naive) / naive <= 1e-12

    def test_forecast_tracks_measurement_small_scale(self):
        res = xp.run_accum2(AlgorithmId.Cplx39, m=2000, n=400, seed=13)
        assert res.stats.avg == pytest.approx(res.forecast.mu_y_err_u,
                                              rel=0.25)
        assert res.stats.std == pytest.approx(res.forecast.sigma_y_u,
                                              rel=0.25)

    def test_threads_do_not_change_results(self):
        a = xp.run_accum2(AlgorithmId.CplxNew, m=500, n=64, seed=14, threads=1)
        b = xp.run_accum2(AlgorithmId.CplxNew, m=500, n=64, seed=14, threads=8)
        assert a.stats == b.stats
        assert a.forecast == b.forecast


class TestAccum3:
    def test_m_zero_all_stats_zero(self):
        res = xp.run_accum3(AlgorithmId.CplxNew, m=0, n=8, seed=15)
        assert res.prod_stats.avg == 0.0
        assert res.norm_stats.avg == 0.0
        assert res.ortho_stats.avg == 0.0

    def test_norm_proxy_tracks_product(self):
        res = xp.run_accum3(AlgorithmId.Cplx39, m=3000, n=48, seed=16)
        assert res.norm_stats.avg == pytest.approx(res.prod_stats.avg,
                                                   rel=0.15)

    def test_block_size_invariance(self):
        old = xp._ACCUM3_BLOCK
        try:
            xp._ACCUM3_BLOCK = 7
            a = xp.run_accum3(AlgorithmId.Cplx310, m=200, n=20, seed=17)
            xp._ACCUM3_BLOCK = 256
            b = xp.run_accum3(AlgorithmId.Cplx310, m=200, n=20, seed=17)
        finally:
            xp._ACCUM3_BLOCK = old
        assert a.prod_stats == b.prod_stats
        assert a.ortho_stats == b.ortho_stats


class TestBench:
    def test_structure_and_noop_floor(self):
        scenarios = load_scenarios()[:2]
        rows = xp.run_bench(scenarios, samples=4000, seed=18, reps=2,
                            columns=("noop",) + xp.BENCH_COLUMNS[:3])
        assert len(rows) == 2 * 4
        by_algo = {}
        for row in rows:
            assert row.ns_per_call >= 0.0
            assert math.isfinite(row.ns_per_call)
            by_algo.setdefault(row.algo, []).append(row.ns_per_call)
        for label in ("cplx_39", "cplx_310", "cplx_new"):
            assert min(by_algo["noop"]) < min(by_algo[label])
