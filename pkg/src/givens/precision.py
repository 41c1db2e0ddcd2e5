"""Floating-point format constants for the two supported precisions.

The working precision is IEEE-754 binary32 and the reference precision is
binary64.  Every kernel in this package is parameterized by one of these
formats through an :class:`FpConstants` instance, normally looked up from
the dtype of the input arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FpConstants:
    """Guard thresholds and the unit roundoff of one binary format.

    ``safmin`` is the smallest positive normal number and ``safmax`` its
    exact reciprocal (both powers of two, so ``safmin * safmax == 1``).
    ``rtmin = sqrt(safmin)`` and ``rtmax = sqrt(safmax / 2)`` bound the
    region where squared moduli and their sums can be formed without
    overflow or underflow: ``(rtmin * rtmax)**2 == 1/2``.
    """

    name: str
    u: float
    safmin: float
    safmax: float
    rtmin: float
    rtmax: float
    real_dtype: np.dtype
    complex_dtype: np.dtype

    def typed(self, value: float):
        """Return ``value`` rounded to this format's real dtype."""
        return self.real_dtype.type(value)

    @property
    def safmin_t(self):
        return self.typed(self.safmin)

    @property
    def rtmin_t(self):
        return self.typed(self.rtmin)

    @property
    def rtmax_t(self):
        return self.typed(self.rtmax)


def _make(name: str, real_dtype, complex_dtype) -> FpConstants:
    info = np.finfo(real_dtype)
    # smallest positive normal: 2**(minexp); numpy's minexp is the exponent
    # of the smallest normal (e.g. -126 for binary32)
    safmin = 2.0 ** info.minexp
    safmax = 2.0 ** (-info.minexp)
    u = 2.0 ** (-(info.nmant + 1))
    rtmin = 2.0 ** (info.minexp // 2)
    rtmax = float(np.sqrt(np.dtype(real_dtype).type(safmax / 2)))
    return FpConstants(
        name=name,
        u=u,
        safmin=safmin,
        safmax=safmax,
        rtmin=rtmin,
        rtmax=rtmax,
        real_dtype=np.dtype(real_dtype),
        complex_dtype=np.dtype(complex_dtype),
    )


BINARY32 = _make("binary32", np.float32, np.complex64)
BINARY64 = _make("binary64", np.float64, np.complex128)

BY_NAME = {"binary32": BINARY32, "binary64": BINARY64}

_BY_DTYPE = {
    np.dtype(np.float32): BINARY32,
    np.dtype(np.complex64): BINARY32,
    np.dtype(np.float64): BINARY64,
    np.dtype(np.complex128): BINARY64,
}


def constants_for(dtype) -> FpConstants:
    """Constants of the format a real or complex dtype belongs to."""
    try:
        return _BY_DTYPE[np.dtype(dtype)]
    except KeyError:
        raise TypeError(f"unsupported dtype {dtype!r}; expected "
                        "float32/float64/complex64/complex128") from None


def reference_of(consts: FpConstants) -> FpConstants:
    """The reference precision used to measure errors (binary64)."""
    return BINARY64
