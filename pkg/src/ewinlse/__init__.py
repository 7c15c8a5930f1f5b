"""Spectral exponential-integrator solvers for the 1D periodic NLSE."""

from .errors import BlowUpError, CacheError, ConfigurationError, FitError
from .spectral import (
    GridField,
    PeriodicGrid,
    SpectralField,
    dft,
    evaluate,
    extended_product,
    idft,
    project,
    sobolev_norm,
    zero_pad,
)
from .physics import Nonlinearity, Potential, apply_B, potential_coeffs
from .integrators import (
    SCHEMES,
    SchemeConfig,
    SolverState,
    evolve,
    ewi_efp_step,
    ewi_fp_step,
    ewi_fs_step,
    free_flow,
    initial_field,
    lie_trotter_step,
    phi1_multiplier,
    strang_step,
)

__version__ = "0.1.0"

__all__ = [
    "BlowUpError",
    "CacheError",
    "ConfigurationError",
    "FitError",
    "GridField",
    "PeriodicGrid",
    "SpectralField",
    "dft",
    "idft",
    "evaluate",
    "project",
    "sobolev_norm",
    "zero_pad",
    "extended_product",
    "Nonlinearity",
    "Potential",
    "apply_B",
    "potential_coeffs",
    "SCHEMES",
    "SchemeConfig",
    "SolverState",
    "evolve",
    "free_flow",
    "phi1_multiplier",
    "initial_field",
    "ewi_fs_step",
    "ewi_efp_step",
    "ewi_fp_step",
    "lie_trotter_step",
    "strang_step",
    "__version__",
]
