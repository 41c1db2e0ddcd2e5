"""Quality measures for computed rotations.

A computed rotation ``Q = [[c, s], [-conj(s), c]]`` is a scalar multiple
of a unitary matrix; its unique singular value ``sigma = sqrt(c^2+|s|^2)``
measures non-unitarity, and the backward error measures how far
``(c, s, r)`` is from exactly rotating ``(f, g)``.  All measurements are
evaluated in the reference precision (binary64), and error statistics are
expressed in units of the working precision's unit roundoff.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .precision import BINARY64, constants_for
from .rotations import ComplexRotation, lartg_cplx_new


@dataclass
class RotationQuality:
    """Per-sample errors, in units of the working precision's u."""

    sigma_err: np.ndarray
    backward_err: np.ndarray
    c_relerr: np.ndarray
    s_relerr: np.ndarray
    r_relerr: np.ndarray


def _promote(rot: ComplexRotation):
    c = np.asarray(rot.c, dtype=np.float64)
    s = np.asarray(rot.s, dtype=np.complex128)
    r = np.asarray(rot.r, dtype=np.complex128)
    return c, s, r


def sigma(rot: ComplexRotation) -> np.ndarray:
    """Singular value ``sqrt(c^2 + |s|^2)`` of the computed rotation."""
    c, s, _ = _promote(rot)
    return np.sqrt(c * c + s.real * s.real + s.imag * s.imag)


def backward_error(rot: ComplexRotation, f, g) -> np.ndarray:
    """``norm(adjoint(Q) @ (r, 0) - (f, g)) / norm((f, g))`` in binary64."""
    c, s, r = _promote(rot)
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    nf2 = f.real ** 2 + f.imag ** 2
    ng2 = g.real ** 2 + g.imag ** 2
    denom2 = nf2 + ng2
    if not (denom2 > 0).all():
        raise ValueError("backward error undefined for (f, g) = (0, 0)")
    e1 = c * r - f
    e2 = np.conj(s) * r - g
    num2 = (e1.real ** 2 + e1.imag ** 2) + (e2.real ** 2 + e2.imag ** 2)
    return np.sqrt(num2 / denom2)


def reference_rotation(f, g) -> ComplexRotation:
    """Oracle rotation: the reduced-rounding generator run in binary64."""
    f64 = np.asarray(f, dtype=np.complex128)
    g64 = np.asarray(g, dtype=np.complex128)
    return lartg_cplx_new(f64, g64)


def component_rel_errors(rot: ComplexRotation, f, g):
    """Relative errors of ``c, s, r`` against the binary64 oracle.

    Returned in units of the working precision's unit roundoff; requires
    ``f != 0`` and ``g != 0`` so that the oracle ``c`` and ``s`` are
    nonzero.
    """
    u = rot.working.u
    ref = reference_rotation(f, g)
    c, s, r = _promote(rot)
    c_rel = np.abs(c - ref.c) / np.abs(ref.c)
    s_rel = np.abs(s - ref.s) / np.abs(ref.s)
    r_rel = np.abs(r - ref.r) / np.abs(ref.r)
    return c_rel / u, s_rel / u, r_rel / u


def quality(rot: ComplexRotation, f, g) -> RotationQuality:
    u = rot.working.u
    c_rel, s_rel, r_rel = component_rel_errors(rot, f, g)
    return RotationQuality(
        sigma_err=(sigma(rot) - 1.0) / u,
        backward_err=backward_error(rot, f, g) / u,
        c_relerr=c_rel,
        s_relerr=s_rel,
        r_relerr=r_rel,
    )


def offdiag_avg(m) -> np.ndarray:
    """Mean ``|entry|`` over the six off-diagonal entries of ``m^H m``.

    ``m`` may be a single 3x3 matrix or a batch with shape ``(..., 3, 3)``;
    the product is accumulated in binary64.
    """
    m = np.asarray(m, dtype=np.complex128)
    s = np.swapaxes(m, -1, -2).conj() @ m
    mask = ~np.eye(3, dtype=bool)
    return np.abs(s[..., mask]).mean(axis=-1)
