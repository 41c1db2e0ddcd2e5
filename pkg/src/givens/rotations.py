"""Givens rotation generators.

A rotation for the pair ``(f, g)`` is the unitary 2x2 matrix
``[[c, s], [-conj(s), c]]`` mapping ``(f, g)`` to ``(r, 0)``.  This module
implements three real-arithmetic sign conventions and three complex
algorithms (the LAPACK 3.9 strategy, the LAPACK 3.10 strategy, and the
reduced-rounding variant), plus the strategy of computing in binary64 and
rounding the outputs back to binary32.

Every kernel is written as a sequence of elementary numpy operations on
the real and imaginary parts so that each arithmetic step is a single
correctly-rounded operation in the working precision: no fused
multiply-adds and no value-changing reassociation.  The precision is
inferred from the dtype of the inputs (complex64 -> binary32,
complex128 -> binary64).

Branches are evaluated vectorized: both sides of each branch are computed
for the whole array and merged per element, which reproduces the scalar
branch semantics exactly (spurious overflow/invalid warnings from
unselected lanes are suppressed).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .precision import BINARY64, FpConstants, constants_for


class AlgorithmId(enum.Enum):
    """Closed set of rotation generators used throughout the experiments."""

    Real39 = "real_39"
    Real310 = "real_310"
    RealHigham = "real_higham"
    Cplx39 = "cplx_39"
    Cplx310 = "cplx_310"
    CplxNew = "cplx_new"
    CplxCast = "cplx_cast"

    @classmethod
    def parse(cls, name: str) -> "AlgorithmId":
        for member in cls:
            if member.value == name:
                return member
        raise ValueError(f"unknown algorithm {name!r}; expected one of "
                         f"{[m.value for m in cls]}")

    @property
    def is_complex(self) -> bool:
        return self.value.startswith("cplx")


COMPLEX_ALGOS = (AlgorithmId.Cplx39, AlgorithmId.Cplx310,
                 AlgorithmId.CplxNew, AlgorithmId.CplxCast)
REAL_ALGOS = (AlgorithmId.Real39, AlgorithmId.Real310, AlgorithmId.RealHigham)


@dataclass
class RealRotation:
    c: np.ndarray
    s: np.ndarray
    r: np.ndarray


@dataclass
class ComplexRotation:
    c: np.ndarray  # real, nonnegative
    s: np.ndarray  # complex
    r: np.ndarray  # complex

    @property
    def working(self) -> FpConstants:
        return constants_for(np.asarray(self.s).dtype)


def _split_complex(f, g):
    f = np.asarray(f)
    g = np.asarray(g)
    if f.dtype != g.dtype:
        raise TypeError(f"f and g must share a dtype, got {f.dtype} and {g.dtype}")
    K = constants_for(f.dtype)
    if K.complex_dtype != f.dtype:
        raise TypeError(f"expected complex inputs, got {f.dtype}")
    f, g = np.broadcast_arrays(f, g)
    fr = np.array(f.real)
    fi = np.array(f.imag)
    gr = np.array(g.real)
    gi = np.array(g.imag)
    return fr, fi, gr, gi, K


def _recompose(re, im, K: FpConstants):
    out = np.empty(np.broadcast(re, im).shape, dtype=K.complex_dtype)
    out.real = re
    out.imag = im
    return out


def _abs2(xr, xi):
    # fl(xr^2 + xi^2): three roundings
    a = xr * xr
    b = xi * xi
    return a + b


def _cmul(ar, ai, br, bi):
    # (ar + i*ai) * (br + i*bi), four products and two sums
    re = ar * br - ai * bi
    im = ar * bi + ai * br
    return re, im


# ---------------------------------------------------------------------------
# real-arithmetic generators


def lartg_real(variant: AlgorithmId, f, g) -> RealRotation:
    """Real Givens rotation ``c*f + s*g = r``, ``-s*f + c*g = 0``.

    The three variants compute bitwise-identical magnitudes and differ only
    in the sign factor ``p``: ``Real310`` uses ``p = sign(f)``;
    ``RealHigham`` uses ``p = 1``; ``Real39`` flips to ``p = sign(f)`` only
    when ``|f| > |g|`` (making ``c`` nonnegative there) and keeps ``p = 1``
    otherwise.  ``g = 0`` returns ``(1, 0, f)`` and ``f = 0`` returns
    ``(0, 1, g)`` for every variant.
    """
    if variant not in REAL_ALGOS:
        raise ValueError(f"{variant} is not a real-arithmetic variant")
    f = np.asarray(f)
    g = np.asarray(g)
    K = constants_for(f.dtype)
    if K.real_dtype != f.dtype or g.dtype != f.dtype:
        raise TypeError(f"expected matching real inputs, got {f.dtype}/{g.dtype}")
    f, g = np.broadcast_arrays(f, g)
    one = K.typed(1.0)
    zero = K.typed(0.0)

    with np.errstate(all="ignore"):
        f2 = f * f
        g2 = g * g
        t = np.sqrt(f2 + g2)
        if variant is AlgorithmId.Real310:
            p = np.where(np.signbit(f), -one, one)
        elif variant is AlgorithmId.RealHigham:
            p = one
        else:  # Real39
            p = np.where((np.abs(f) > np.abs(g)) & np.signbit(f), -one, one)
        c = p * (f / t)
        s = p * (g / t)
        r = p * t

    g_zero = g == zero
    f_zero = (f == zero) & ~g_zero
    c = np.where(g_zero, one, np.where(f_zero, zero, c))
    s = np.where(g_zero, zero, np.where(f_zero, one, s))
    r = np.where(g_zero, f, np.where(f_zero, g, r))
    return RealRotation(c=c, s=s, r=r)


# ---------------------------------------------------------------------------
# complex-arithmetic generators (unscaled paths + zero-input fast paths)


def _zero_masks(fr, fi, gr, gi):
    zero = fr.dtype.type(0)
    g_zero = (gr == zero) & (gi == zero)
    f_zero = (fr == zero) & (fi == zero) & ~g_zero
    return g_zero, f_zero


def _apply_zero_cases(c, sr, si, rr, ri, fr, fi, gr, gi, K: FpConstants):
    g_zero, f_zero = _zero_masks(fr, fi, gr, gi)
    if not (g_zero.any() or f_zero.any()):
        return c, sr, si, rr, ri
    one = K.typed(1.0)
    zero = K.typed(0.0)
    with np.errstate(all="ignore"):
        ag = np.hypot(gr, gi)
        ur = gr / ag
        ui = -(gi / ag)
    c = np.where(g_zero, one, np.where(f_zero, zero, c))
    sr = np.where(g_zero, zero, np.where(f_zero, ur, sr))
    si = np.where(g_zero, zero, np.where(f_zero, ui, si))
    rr = np.where(g_zero, fr, np.where(f_zero, ag, rr))
    ri = np.where(g_zero, fi, np.where(f_zero, zero, ri))
    return c, sr, si, rr, ri


def _v39_masks(f2, g2, K: FpConstants):
    one = K.typed(1.0)
    return f2 <= np.maximum(g2, one) * K.safmin_t


def _v39_kernel(fr, fi, gr, gi, K: FpConstants):
    one = K.typed(1.0)
    with np.errstate(all="ignore"):
        f2 = _abs2(fr, fi)
        g2 = _abs2(gr, gi)
        small = _v39_masks(f2, g2, K)

        # main path: t = sqrt(1 + g2/f2); c = 1/t; r = t*f; s = conj(g)*(r/h2)
        t = np.sqrt(one + g2 / f2)
        c_m = one / t
        rr_m = t * fr
        ri_m = t * fi
        h2 = f2 + g2
        vr = rr_m / h2
        vi = ri_m / h2
        sr_m, si_m = _cmul(gr, -gi, vr, vi)

        # dominant-g path (f2 vanishes next to g2): work with moduli directly
        f1 = np.sqrt(f2)
        g1 = np.sqrt(g2)
        c_s = f1 / g1
        ffr = fr / f1
        ffi = fi / f1
        tr = gr / g1
        ti = -(gi / g1)
        sr_s, si_s = _cmul(ffr, ffi, tr, ti)
        pr, pi = _cmul(sr_s, si_s, gr, gi)
        rr_s = c_s * fr + pr
        ri_s = c_s * fi + pi

        c = np.where(small, c_s, c_m)
        sr = np.where(small, sr_s, sr_m)
        si = np.where(small, si_s, si_m)
        rr = np.where(small, rr_s, rr_m)
        ri = np.where(small, ri_s, ri_m)
    return c, sr, si, rr, ri


def _v310_masks(f2, h2, K: FpConstants):
    return (f2 > K.rtmin_t) & (h2 < K.rtmax_t)


def _v310_kernel(fr, fi, gr, gi, K: FpConstants):
    one = K.typed(1.0)
    with np.errstate(all="ignore"):
        f2 = _abs2(fr, fi)
        g2 = _abs2(gr, gi)
        h2 = f2 + g2
        safe = _v310_masks(f2, h2, K)
        d = np.where(safe, np.sqrt(f2 * h2), np.sqrt(f2) * np.sqrt(h2))
        p = one / d
        c = f2 * p
        hp = h2 * p
        rr = fr * hp
        ri = fi * hp
        tr = fr * p
        ti = fi * p
        sr, si = _cmul(gr, -gi, tr, ti)
    return c, sr, si, rr, ri


def _new_masks(f2, h2, c_b, K: FpConstants):
    big_f = K.safmin_t * h2 <= f2
    s_direct = (f2 > K.rtmin_t) & (h2 < K.rtmax_t)
    r_direct = c_b > K.safmin_t
    return big_f, s_direct, r_direct


def _new_kernel(fr, fi, gr, gi, K: FpConstants):
    with np.errstate(all="ignore"):
        f2 = _abs2(fr, fi)
        g2 = _abs2(gr, gi)
        h2 = f2 + g2

        # branch (b) quantities are needed by the masks (r path depends on c)
        d = np.sqrt(f2 * h2)
        c_b = f2 / d
        big_f, s_direct, r_direct = _new_masks(f2, h2, c_b, K)

        # branch (a): f2 is not negligible next to h2
        c_a = np.sqrt(f2 / h2)
        rr_a = fr / c_a
        ri_a = fi / c_a
        sq = np.sqrt(f2 * h2)
        ur = fr / sq
        ui = fi / sq
        sr_a1, si_a1 = _cmul(gr, -gi, ur, ui)  # s = conj(g)*(f/sqrt(f2*h2))
        vr = rr_a / h2
        vi = ri_a / h2
        sr_a2, si_a2 = _cmul(gr, -gi, vr, vi)  # s = conj(g)*(r/h2)
        sr_a = np.where(s_direct, sr_a1, sr_a2)
        si_a = np.where(s_direct, si_a1, si_a2)

        # branch (b): f2/h2 could be subnormal
        wr = fr / d
        wi = fi / d
        sr_b, si_b = _cmul(gr, -gi, wr, wi)  # s = conj(g)*(f/d)
        rr_b1 = fr / c_b
        ri_b1 = fi / c_b
        hd = h2 / d
        rr_b2 = fr * hd
        ri_b2 = fi * hd
        rr_b = np.where(r_direct, rr_b1, rr_b2)
        ri_b = np.where(r_direct, ri_b1, ri_b2)

        c = np.where(big_f, c_a, c_b)
        sr = np.where(big_f, sr_a, sr_b)
        si = np.where(big_f, si_a, si_b)
        rr = np.where(big_f, rr_a, rr_b)
        ri = np.where(big_f, ri_a, ri_b)
    return c, sr, si, rr, ri


def _make_generator(kernel):
    def generator(f, g) -> ComplexRotation:
        fr, fi, gr, gi, K = _split_complex(f, g)
        c, sr, si, rr, ri = kernel(fr, fi, gr, gi, K)
        c, sr, si, rr, ri = _apply_zero_cases(c, sr, si, rr, ri,
                                              fr, fi, gr, gi, K)
        return ComplexRotation(c=c, s=_recompose(sr, si, K),
                               r=_recompose(rr, ri, K))
    return generator


lartg_cplx_v39 = _make_generator(_v39_kernel)
lartg_cplx_v39.__name__ = "lartg_cplx_v39"
lartg_cplx_v39.__doc__ = """LAPACK-3.9-style complex rotation (unscaled path).

Computes ``t = sqrt(1 + g2/f2)``, ``c = 1/t``, ``r = t*f``,
``s = conj(g) * (r / (f2 + g2))``.  When ``f2`` would vanish next to
``g2`` (``f2 <= max(g2, 1) * safmin``) the quotient ``g2/f2`` is not
representable, so moduli are used directly: ``c = |f|/|g|``,
``s = (f/|f|) * conj(g)/|g|`` and ``r = c*f + s*g``.
"""

lartg_cplx_v310 = _make_generator(_v310_kernel)
lartg_cplx_v310.__name__ = "lartg_cplx_v310"
lartg_cplx_v310.__doc__ = """LAPACK-3.10-style complex rotation (unscaled path).

Computes ``d = sqrt(f2*h2)``, ``p = 1/d``, ``c = f2*p``, ``r = f*(h2*p)``
and ``s = conj(g)*(f*p)``.  When the product ``f2*h2`` could leave the
safe range (``f2 <= rtmin`` or ``h2 >= rtmax``) the lower-accuracy
fallback ``d = sqrt(f2)*sqrt(h2)`` is used instead.
"""

lartg_cplx_new = _make_generator(_new_kernel)
lartg_cplx_new.__name__ = "lartg_cplx_new"
lartg_cplx_new.__doc__ = """Reduced-rounding complex rotation (unscaled path).

If ``safmin*h2 <= f2``: ``c = sqrt(f2/h2)``, ``r = f/c``, and
``s = conj(g)*(f/sqrt(f2*h2))`` when ``f2 > rtmin`` and ``h2 < rtmax``,
else ``s = conj(g)*(r/h2)``.  Otherwise ``d = sqrt(f2*h2)``, ``c = f2/d``,
``s = conj(g)*(f/d)``, and ``r = f/c`` when ``c > safmin``, else
``r = f*(h2/d)``.
"""


def lartg_cplx_cast(f, g) -> ComplexRotation:
    """Compute the rotation in binary64 and round the outputs down.

    The inputs are promoted exactly, the reduced-rounding algorithm runs in
    the reference precision, and ``c``, ``s``, ``r`` are rounded to the
    working precision (round-to-nearest-even).
    """
    fr, fi, gr, gi, K = _split_complex(f, g)
    if K is BINARY64:
        return lartg_cplx_new(f, g)
    f64 = np.asarray(f, dtype=BINARY64.complex_dtype)
    g64 = np.asarray(g, dtype=BINARY64.complex_dtype)
    rot = lartg_cplx_new(f64, g64)
    return ComplexRotation(c=rot.c.astype(K.real_dtype),
                           s=rot.s.astype(K.complex_dtype),
                           r=rot.r.astype(K.complex_dtype))


_UNSCALED = {
    AlgorithmId.Cplx39: lartg_cplx_v39,
    AlgorithmId.Cplx310: lartg_cplx_v310,
    AlgorithmId.CplxNew: lartg_cplx_new,
}


def _wrapper_scale_exponent(fr, fi, gr, gi, K: FpConstants):
    m = np.maximum(np.maximum(np.abs(fr), np.abs(fi)),
                   np.maximum(np.abs(gr), np.abs(gi)))
    engage = np.isfinite(m) & (m > 0) & ((m < K.rtmin_t) | (m > K.rtmax_t))
    _, e = np.frexp(m)
    # normalize the max component magnitude into [1/2, 1)
    k = np.where(engage, -e, 0).astype(np.int32)
    return k, engage


def scale_wrapper(inner, f, g) -> ComplexRotation:
    """Run ``inner`` on power-of-two rescaled inputs when needed.

    If the largest component magnitude of ``(f, g)`` lies outside
    ``[rtmin, rtmax]`` both inputs are multiplied by an exact power of two
    that brings it into ``[1/2, 1)``, the inner generator runs, and ``r``
    is scaled back.  ``c`` and ``s`` are scale invariant and returned as
    produced.  Scaling by powers of two is exact, so in-range inputs pass
    through bit-identically (``k = 0``).
    """
    fr, fi, gr, gi, K = _split_complex(f, g)
    k, engage = _wrapper_scale_exponent(fr, fi, gr, gi, K)
    if not engage.any():
        return inner(f, g)
    fs = _recompose(np.ldexp(fr, k), np.ldexp(fi, k), K)
    gs = _recompose(np.ldexp(gr, k), np.ldexp(gi, k), K)
    rot = inner(fs, gs)
    with np.errstate(all="ignore"):
        rr = np.ldexp(np.asarray(rot.r.real), -k)
        ri = np.ldexp(np.asarray(rot.r.imag), -k)
    return ComplexRotation(c=rot.c, s=rot.s, r=_recompose(rr, ri, K))


def generate(algo: AlgorithmId, f, g):
    """Dispatch to a generator, with out-of-range scaling for complex ones."""
    if algo in REAL_ALGOS:
        return lartg_real(algo, f, g)
    if algo is AlgorithmId.CplxCast:
        return lartg_cplx_cast(f, g)
    return scale_wrapper(_UNSCALED[algo], f, g)


# ---------------------------------------------------------------------------
# branch signatures: which internal path each element takes (used by the
# scale-equivariance tests to filter out branch flips)


def _inner_signature(algo: AlgorithmId, fr, fi, gr, gi, K: FpConstants):
    g_zero, f_zero = _zero_masks(fr, fi, gr, gi)
    code = np.zeros(fr.shape, dtype=np.uint8)
    code |= g_zero.astype(np.uint8) << 6
    code |= f_zero.astype(np.uint8) << 5
    with np.errstate(all="ignore"):
        f2 = _abs2(fr, fi)
        g2 = _abs2(gr, gi)
        h2 = f2 + g2
        if algo is AlgorithmId.Cplx39:
            code |= _v39_masks(f2, g2, K).astype(np.uint8)
        elif algo is AlgorithmId.Cplx310:
            code |= _v310_masks(f2, h2, K).astype(np.uint8)
        elif algo is AlgorithmId.CplxNew:
            d = np.sqrt(f2 * h2)
            c_b = f2 / d
            big_f, s_direct, r_direct = _new_masks(f2, h2, c_b, K)
            code |= big_f.astype(np.uint8)
            code |= s_direct.astype(np.uint8) << 1
            code |= r_direct.astype(np.uint8) << 2
        else:
            raise ValueError(f"no branch signature for {algo}")
    return code


def branch_signature(algo: AlgorithmId, f, g):
    """Branch code per element as seen by :func:`generate` (wrapper included)."""
    fr, fi, gr, gi, K = _split_complex(f, g)
    k, engage = _wrapper_scale_exponent(fr, fi, gr, gi, K)
    fr = np.ldexp(fr, k)
    fi = np.ldexp(fi, k)
    gr = np.ldexp(gr, k)
    gi = np.ldexp(gi, k)
    code = _inner_signature(algo, fr, fi, gr, gi, K)
    return code | (engage.astype(np.uint8) << 7)
