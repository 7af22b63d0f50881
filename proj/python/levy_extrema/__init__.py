"""Wiener-Hopf extrema distributions for one-dimensional Levy processes.

Thin wrapper around the C++ core: process families, stopped characteristic
functions, rational pole fitting, half-plane factorization, closed-form
extrema densities, ruin probabilities, and a Monte Carlo cross-check.
"""

from _levy_extrema import (  # noqa: F401
    BrownianDrift,
    CompoundPoissonMixedGamma,
    CosechSquaredJumps,
    DomainError,
    ExtremaDensity,
    GeneralizedHyperbolic,
    HalfPlaneFactor,
    LevxError,
    MixedGammaJumps,
    MixedGammaTerm,
    PipelineOptions,
    PipelineResult,
    RuinCurve,
    SearchRegion,
    SimConfig,
    StoppingTime,
    SymmetricStable,
    bessel_k,
    error_bound_compound_poisson,
    error_bound_factorization,
    find_poles,
    finite_time_ruin,
    hilbert_transform,
    ks_distance,
    mixed_gamma_density,
    psi,
    ruin_curve,
    run_pipeline,
    simulate_extrema,
    stopped_cf,
)

__all__ = [
    "BrownianDrift",
    "CompoundPoissonMixedGamma",
    "CosechSquaredJumps",
    "DomainError",
    "ExtremaDensity",
    "GeneralizedHyperbolic",
    "HalfPlaneFactor",
    "LevxError",
    "MixedGammaJumps",
    "MixedGammaTerm",
    "PipelineOptions",
    "PipelineResult",
    "RuinCurve",
    "SearchRegion",
    "SimConfig",
    "StoppingTime",
    "SymmetricStable",
    "bessel_k",
    "error_bound_compound_poisson",
    "error_bound_factorization",
    "find_poles",
    "finite_time_ruin",
    "hilbert_transform",
    "ks_distance",
    "mixed_gamma_density",
    "psi",
    "ruin_curve",
    "run_pipeline",
    "simulate_extrema",
    "stopped_cf",
]

__version__ = "0.1.0"
