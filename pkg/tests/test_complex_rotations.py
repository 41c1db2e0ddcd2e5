"""Complex generator tests: worst-case bounds, special cases, scaling."""
import numpy as np
import pytest

from _support import default_pairs, defining_oracle, rel_err_u

from givens import errbounds as eb
from givens import metrics
from givens.precision import BINARY32, BINARY64
from givens.rotations import (AlgorithmId, branch_signature, generate,
                              lartg_cplx_cast, lartg_cplx_new,
                              lartg_cplx_v39, lartg_cplx_v310, scale_wrapper,
                              _UNSCALED)

U = BINARY32.u
c64 = np.complex64

# worst-case relative-error bounds per algorithm, as gamma indices
# (s uses the loosest of the algorithm's s paths)
BOUNDS = {
    AlgorithmId.Cplx39: dict(c=6, r=6, s=10, bw=16),
    AlgorithmId.Cplx310: dict(c=7, r=8, s=9, bw=17),
    AlgorithmId.CplxNew: dict(c=5, r=6, s=9, bw=14),
}

GENS = {
    AlgorithmId.Cplx39: lartg_cplx_v39,
    AlgorithmId.Cplx310: lartg_cplx_v310,
    AlgorithmId.CplxNew: lartg_cplx_new,
    AlgorithmId.CplxCast: lartg_cplx_cast,
}


class TestSpecialCases:
    @pytest.mark.parametrize("gen", list(GENS.values()), ids=list(GENS))
    def test_f_zero(self, gen):
        rot = gen(c64(0), c64(3 + 4j))
        assert float(rot.c) == 0.0
        assert complex(rot.s[()]) == pytest.approx(0.6 - 0.8j, rel=1e-7)
        assert complex(rot.r[()]) == pytest.approx(5.0, rel=1e-7)

    @pytest.mark.parametrize("gen", list(GENS.values()), ids=list(GENS))
    def test_g_zero(self, gen):
        rot = gen(c64(2 - 1j), c64(0))
        assert float(rot.c) == 1.0
        assert complex(rot.s[()]) == 0.0
        assert complex(rot.r[()]) == 2 - 1j

    @pytest.mark.parametrize("gen", list(GENS.values()), ids=list(GENS))
    def test_both_zero_identity(self, gen):
        rot = gen(c64(0), c64(0))
        assert (float(rot.c), complex(rot.s[()]), complex(rot.r[()])) \
            == (1.0, 0.0, 0.0)

    def test_nan_propagates(self):
        rot = lartg_cplx_new(c64(complex(np.nan, 0)), c64(1))
        assert np.isnan(rot.r).any()


class TestAgainstDefiningFormulas:
    def test_unit_inputs(self):
        # f = 1, g = i: c = 1/sqrt(2), s = -i/sqrt(2), r = sqrt(2)
        for algo, gen in GENS.items():
            rot = gen(c64(1), c64(1j))
            assert float(rot.c) == pytest.approx(0.7071067811865476, rel=4e-7)
            assert complex(rot.s[()]) == pytest.approx(-0.7071067811865476j,
                                                       rel=4e-7)
            assert complex(rot.r[()]) == pytest.approx(1.4142135623730951,
                                                       rel=4e-7)

    def test_hand_checked_input(self):
        # independent 60-digit evaluation of the defining formulas
        c_ref = 0.408248290463863
        s_ref = -0.408248290463863 + 0.816496580927726j
        r_ref = 2.449489742783178 + 4.898979485566356j
        for algo, gen in GENS.items():
            rot = gen(c64(1 + 2j), c64(3 - 4j))
            assert float(rot.c) == pytest.approx(c_ref, rel=1e-6)
            assert complex(rot.s[()]) == pytest.approx(s_ref, rel=1e-6)
            assert complex(rot.r[()]) == pytest.approx(r_ref, rel=1e-6)

    def test_defining_oracle_matches_reference_generator(self):
        # the two oracle routes (direct formulas vs binary64 kernel) agree
        f, g = default_pairs(50_000, 21)
        ref = metrics.reference_rotation(f, g)
        c_o, s_o, r_o = defining_oracle(f, g)
        assert (np.abs(ref.c - c_o) / np.abs(c_o)).max() < 1e-12
        assert (np.abs(ref.s - s_o) / np.abs(s_o)).max() < 1e-12
        assert (np.abs(ref.r - r_o) / np.abs(r_o)).max() < 1e-12

    @pytest.mark.parametrize("algo", list(BOUNDS), ids=lambda a: a.value)
    def test_worst_case_bounds_sample(self, algo):
        f, g = default_pairs(200_000, 33)
        rot = GENS[algo](f, g)
        c_o, s_o, r_o = defining_oracle(f, g)
        b = BOUNDS[algo]
        assert rel_err_u(rot.c.astype(np.complex128), c_o).max() \
            <= eb.gamma(b["c"], U) / U
        assert rel_err_u(rot.s, s_o).max() <= eb.gamma(b["s"], U) / U
        assert rel_err_u(rot.r, r_o).max() <= eb.gamma(b["r"], U) / U
        bw = metrics.backward_error(rot, f, g) / U
        assert bw.max() <= eb.gamma(b["bw"], U) / U

    def test_cast_outputs_are_correctly_rounded(self):
        f, g = default_pairs(100_000, 34)
        rot = lartg_cplx_cast(f, g)
        c_o, s_o, r_o = defining_oracle(f, g)
        # half-ulp rounding of the oracle, plus the oracle's own binary64
        # error: strictly below one unit roundoff relative
        assert rel_err_u(rot.c.astype(np.complex128), c_o).max() <= 1.0
        assert rel_err_u(rot.s, s_o).max() <= 1.0
        assert rel_err_u(rot.r, r_o).max() <= 1.0


class TestAnnihilation:
    @pytest.mark.parametrize("algo", list(GENS), ids=lambda a: a.value)
    def test_rotation_annihilates_g(self, algo):
        f, g = default_pairs(100_000, 55)
        rot = GENS[algo](f, g)
        s = rot.s.astype(np.complex128)
        c = rot.c.astype(np.float64)
        f64 = f.astype(np.complex128)
        g64 = g.astype(np.complex128)
        resid = np.abs(-np.conj(s) * f64 + c * g64)
        norm = np.sqrt(np.abs(f64) ** 2 + np.abs(g64) ** 2)
        assert (resid / norm).max() <= eb.gamma(10, U)


class TestNewAlgorithmBranches:
    def test_branch_b_trigger_within_bounds(self):
        # safmin*h2 > f2 with f2 still normal requires h2 >> 1: pair a
        # small-normal f with a large g
        rng = np.random.default_rng(99)
        n = 20_000
        theta = rng.uniform(0, 2 * np.pi, n)
        phi = rng.uniform(0, 2 * np.pi, n)
        rf = np.exp2(rng.uniform(-60, -56, n)).astype(np.float32)
        rg = np.exp2(rng.uniform(56, 60, n)).astype(np.float32)
        f = np.empty(n, np.complex64)
        g = np.empty(n, np.complex64)
        f.real = rf * np.cos(theta).astype(np.float32)
        f.imag = rf * np.sin(theta).astype(np.float32)
        g.real = rg * np.cos(phi).astype(np.float32)
        g.imag = rg * np.sin(phi).astype(np.float32)
        code = branch_signature(AlgorithmId.CplxNew, f, g)
        assert not (code & 1).any(), "expected branch (b): safmin*h2 > f2"
        rot = lartg_cplx_new(f, g)
        c_o, s_o, r_o = defining_oracle(f, g)
        assert rel_err_u(rot.c.astype(np.complex128), c_o).max() \
            <= eb.gamma(5, U) / U
        assert rel_err_u(rot.s, s_o).max() <= eb.gamma(7, U) / U
        assert rel_err_u(rot.r, r_o).max() <= eb.gamma(6, U) / U

    def test_c_nonnegative_and_bounded(self):
        f, g = default_pairs(100_000, 66)
        rot = lartg_cplx_new(f, g)
        assert (rot.c >= 0).all()
        assert rot.c.max() <= 1.0 + eb.gamma(5, U)


class TestScaleWrapper:
    def test_identity_for_in_range_inputs(self):
        f, g = default_pairs(10_000, 77)
        for algo, inner in _UNSCALED.items():
            direct = inner(f, g)
            wrapped = scale_wrapper(inner, f, g)
            assert np.array_equal(direct.c, wrapped.c)
            assert np.array_equal(direct.s, wrapped.s)
            assert np.array_equal(direct.r, wrapped.r)

    def test_huge_inputs_scale_exactly(self):
        f, g = default_pairs(10_000, 78)
        shift = np.float32(2.0 ** 120)
        keep = (np.abs(f) < 2.0 ** 5) & (np.abs(g) < 2.0 ** 5) \
            & (np.abs(f) > 2.0 ** -5) & (np.abs(g) > 2.0 ** -5)
        f, g = f[keep], g[keep]
        for algo, inner in _UNSCALED.items():
            base = scale_wrapper(inner, f, g)
            big = scale_wrapper(inner, f * shift, g * shift)
            assert np.array_equal(base.c, big.c)
            assert np.array_equal(base.s.view(np.uint64),
                                  big.s.view(np.uint64))
            assert np.array_equal(big.r.astype(np.complex128),
                                  base.r.astype(np.complex128) * 2.0 ** 120)

    def test_subnormal_inputs(self):
        f = c64(complex(2.0 ** -140, 2.0 ** -141))
        g = c64(complex(2.0 ** -140, 0.0))
        for algo in _UNSCALED:
            rot = generate(algo, f, g)
            assert np.isfinite(rot.r).all() and (rot.r != 0).all()
            c_o, s_o, r_o = defining_oracle(f, g)
            assert rel_err_u(rot.c.astype(np.complex128), c_o).max() \
                <= eb.gamma(7, U) / U
            assert rel_err_u(rot.s, s_o).max() <= eb.gamma(10, U) / U
            # r itself rounds to subnormal: compare against the rounded oracle
            r_rounded = np.asarray(r_o).astype(np.complex64)
            err = np.abs(rot.r.astype(np.complex128)
                         - r_rounded.astype(np.complex128))
            assert (err <= 2 * np.spacing(np.abs(r_rounded))).all()


class TestCastSigmaDominance:
    def test_cast_never_worse_than_best_working(self):
        f, g = default_pairs(100_000, 88)
        sig_cast = np.abs(metrics.sigma(lartg_cplx_cast(f, g)) - 1.0)
        best = np.minimum.reduce([
            np.abs(metrics.sigma(gen(f, g)) - 1.0)
            for a, gen in GENS.items() if a is not AlgorithmId.CplxCast])
        assert (sig_cast <= best + U).all()
