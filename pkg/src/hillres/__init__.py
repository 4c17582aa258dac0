"""Spectral toolkit for -y'' + (p + q) y on the half-line.

p is a 1-periodic trigonometric polynomial, q a compactly supported
piecewise polynomial.  The package computes the band structure of the
periodic background, the quasimomentum and Weyl functions on the
two-sheeted momentum surface, the perturbed Jost function, and from it
the bound, antibound, virtual and resonance states together with the
counting and asymptotic laws they obey.
"""
from .errors import (
    BranchAmbiguity,
    ConfigError,
    HillresError,
    Inconclusive,
    OnGapEdge,
    PoleAtMu,
)
from .hill import BandStructure, Monodromy, apply_gauge, band_edges, monodromy
from .jost import (
    boundary_data,
    gap_factors,
    in_forbidden_domain,
    jost0,
    jost0_many,
    locator_many,
    smatrix,
)
from .momentum import SurfacePoint, floquet, ids, quasimomentum, surface_point, weyl_m
from .potentials import (
    CompactPotential,
    PeriodicPotential,
    constants,
    fourier_p,
    fourier_q,
    potentials_from_config,
)
from .states import (
    GapReport,
    State,
    find_gap_states,
    find_negative_states,
    find_resonances,
    norming_constant,
    semiclassical_gap_count,
    structural_checks,
    unperturbed_state,
)

__version__ = "0.1.0"

__all__ = [
    "BandStructure", "BranchAmbiguity", "CompactPotential", "ConfigError",
    "GapReport", "HillresError", "Inconclusive", "Monodromy", "OnGapEdge",
    "PeriodicPotential", "PoleAtMu", "State", "SurfacePoint", "apply_gauge",
    "band_edges", "boundary_data", "constants", "find_gap_states",
    "find_negative_states", "find_resonances", "floquet", "fourier_p",
    "fourier_q", "gap_factors", "ids", "in_forbidden_domain", "jost0",
    "jost0_many", "locator_many", "monodromy", "norming_constant",
    "potentials_from_config", "quasimomentum", "semiclassical_gap_count",
    "smatrix", "structural_checks", "surface_point", "unperturbed_state",
    "weyl_m", "__version__",
]
