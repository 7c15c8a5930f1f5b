"""Built-in desk-scale presets reproducing the seven convergence studies.

Every preset runs on (-16, 16) to T = 1 with the desk-scale reference
parameters tau_ref = 1e-5 and h_ref = 2^-7 (4096 modes); band limits default
to the acceptance values.  Reference choices: temporal sweeps without a
potential use a Strang reference, potential studies use an EWI-EFP
reference, fig51 measures each scheme against its own fine run (pure spatial
self-convergence) and fig53 measures both schemes against the FS truth so
the collocation aliasing error is visible rather than self-cancelling.
"""

from __future__ import annotations

from .errors import ConfigurationError
from .experiments import (
    Datum,
    ErrorRatioBand,
    FluctuationBand,
    GapBand,
    RefSpec,
    SlopeBand,
    StudySpec,
)
from .physics import Nonlinearity, Potential

__all__ = ["PRESET_NAMES", "preset_studies"]

A, B, T = -16.0, 16.0, 1.0
TAU_REF = 1e-5
H_REF = 2.0**-7
TAU_SWEEP = (1e-2, 5e-3, 2.5e-3, 1.25e-3)
H_SWEEP = (2.0**-3, 2.0**-4, 2.0**-5, 2.0**-6)

V1 = Potential.box(-4.0, -2.0, 2.0)
V2 = Potential.power_law(0.76)

PRESET_NAMES = ("fig51", "fig52", "fig53", "fig54", "fig55", "fig56", "fig57")


def _study(label, *, potential, nonlinearity, datum, schemes, sweep, ref_scheme,
           bands, fs_oversample=16, ref_tau=TAU_REF):
    return StudySpec(
        label=label, a=A, b=B, T=T,
        potential=potential, nonlinearity=nonlinearity, datum=datum,
        schemes=schemes, sweep=sweep,
        taus=TAU_SWEEP if sweep == "tau" else (),
        hs=H_SWEEP if sweep == "h" else (),
        reference=RefSpec(ref_scheme, ref_tau, H_REF),
        fs_oversample=fs_oversample,
        bands=tuple(bands),
    )


def _efp_temporal_bands(h1_lo=0.35, h1_hi=0.65):
    return (
        SlopeBand("ewi_efp", "L2", 0.8, 1.2),
        SlopeBand("ewi_efp", "H1", h1_lo, h1_hi),
    )


def preset_studies(name: str) -> list:
    """The StudySpec list for one preset id fig51..fig57."""
    if name == "fig51":
        # spatial orders, semi-smooth nonlinearity, H^2 datum
        return [_study(
            "fig51_spatial_sigma0.1",
            potential=Potential.none(),
            nonlinearity=Nonlinearity.power(-1.0, 0.1),
            datum=Datum.type1(),
            schemes=("ewi_fs", "ewi_efp"),
            sweep="h", ref_scheme="self",
            bands=(
                SlopeBand("ewi_efp", "L2", 1.7, 2.3),
                SlopeBand("ewi_efp", "H1", 0.7, 1.3),
            ),
        )]
    if name == "fig52":
        # temporal orders, semi-smooth nonlinearity, H^2 datum
        return [_study(
            f"fig52_temporal_sigma{sigma:g}",
            potential=Potential.none(),
            nonlinearity=Nonlinearity.power(-1.0, sigma),
            datum=Datum.type1(),
            schemes=("ewi_efp",),
            sweep="tau", ref_scheme="strang",
            bands=_efp_temporal_bands(),
        ) for sigma in (0.1, 0.4)]
    if name == "fig53":
        # spectral vs pseudospectral nonlinearity, smooth datum; both series
        # are measured against the FS truth so the pseudospectral aliasing
        # error shows up instead of cancelling against itself
        return [_study(
            "fig53_spatial_sigma0.1_smooth",
            potential=Potential.none(),
            nonlinearity=Nonlinearity.power(-1.0, 0.1),
            datum=Datum.type2(),
            schemes=("ewi_fs", "ewi_efp"),
            sweep="h", ref_scheme="ewi_fs",
            bands=(GapBand("ewi_fs", "ewi_efp", "L2", 0.6),),
        )]
    if name == "fig54":
        # temporal orders, smooth datum
        return [_study(
            f"fig54_temporal_sigma{sigma:g}",
            potential=Potential.none(),
            nonlinearity=Nonlinearity.power(-1.0, sigma),
            datum=Datum.type2(),
            schemes=("ewi_efp",),
            sweep="tau", ref_scheme="strang",
            bands=_efp_temporal_bands(h1_lo=0.8, h1_hi=1.2),
        ) for sigma in (0.2, 0.8)]
    if name == "fig55":
        # box (Linf) potential, cubic, H^2 datum
        return [
            _study(
                "fig55_spatial_V1",
                potential=V1, nonlinearity=Nonlinearity.cubic(),
                datum=Datum.type1(),
                schemes=("ewi_efp", "ewi_fp"),
                sweep="h", ref_scheme="ewi_efp",
                bands=(
                    SlopeBand("ewi_efp", "L2", 1.7, 2.3),
                    SlopeBand("ewi_efp", "H1", 0.7, 1.3),
                    SlopeBand("ewi_fp", "L2", None, 1.4),
                    ErrorRatioBand("ewi_efp", "ewi_fp", "L2", 0.5),
                ),
            ),
            _study(
                "fig55_temporal_V1",
                potential=V1, nonlinearity=Nonlinearity.cubic(),
                datum=Datum.type1(),
                schemes=("ewi_efp",),
                sweep="tau", ref_scheme="ewi_efp",
                bands=_efp_temporal_bands(),
            ),
        ]
    if name == "fig56":
        # |x|^0.76 (W^{1,4}) potential, cubic, H^3 datum.  The spatial study
        # runs at a smaller tau than the other desk-scale studies: the V2
        # problem's temporal error constant is large and its shape converges
        # slowly in N, so at tau = 1e-5 the non-cancelling part floors the
        # third-order series at the finest mesh.
        return [
            _study(
                "fig56_spatial_V2",
                potential=V2, nonlinearity=Nonlinearity.cubic(),
                datum=Datum.h3(),
                schemes=("ewi_efp", "ewi_fp"),
                sweep="h", ref_scheme="ewi_efp", ref_tau=2.5e-6,
                bands=(
                    SlopeBand("ewi_efp", "L2", 2.6, 3.4),
                    SlopeBand("ewi_efp", "H1", 1.7, 2.3),
                ),
            ),
            _study(
                "fig56_temporal_V2",
                potential=V2, nonlinearity=Nonlinearity.cubic(),
                datum=Datum.h3(),
                schemes=("ewi_efp",),
                sweep="tau", ref_scheme="ewi_efp",
                bands=(SlopeBand("ewi_efp", "H1", 0.8, 1.2),),
            ),
        ]
    if name == "fig57":
        # exponential integrator vs Lie-Trotter splitting, box potential
        return [_study(
            "fig57_compare_tsfp_V1",
            potential=V1, nonlinearity=Nonlinearity.cubic(),
            datum=Datum.type1(),
            schemes=("ewi_efp", "lie_trotter"),
            sweep="tau", ref_scheme="ewi_efp",
            bands=(
                SlopeBand("ewi_efp", "L2", 0.8, 1.2),
                FluctuationBand("lie_trotter", "ewi_efp", "L2", 2.0),
            ),
        )]
    raise ConfigurationError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
