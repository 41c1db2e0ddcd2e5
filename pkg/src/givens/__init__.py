"""Givens rotation generation, rounding-error bounds, and experiments."""

from . import errbounds, experiments, metrics, precision, rotations, sampling
from .precision import BINARY32, BINARY64, FpConstants, constants_for
from .rotations import (AlgorithmId, ComplexRotation, RealRotation, generate,
                        lartg_cplx_cast, lartg_cplx_new, lartg_cplx_v39,
                        lartg_cplx_v310, lartg_real, scale_wrapper)
from .sampling import ScenarioSpec, default_rho, default_spec

__all__ = [
    "AlgorithmId", "BINARY32", "BINARY64", "ComplexRotation", "FpConstants",
    "RealRotation", "ScenarioSpec", "constants_for", "default_rho",
    "default_spec", "errbounds", "experiments", "generate",
    "lartg_cplx_cast", "lartg_cplx_new", "lartg_cplx_v39", "lartg_cplx_v310",
    "lartg_real", "metrics", "precision", "rotations", "sampling",
    "scale_wrapper",
]

__version__ = "0.1.0"
