"""Multilevel Landau-Zener transition amplitudes from anticrossing products.

The package builds two-band Hamiltonian models (linear ramp or sinusoidal
drive), composes their S-matrices from per-anticrossing 2x2-block
unitaries (GAIA), carries the older non-unitary and adiabatic-impulse
constructions for cross-checks, and ships an exact Schroedinger propagator
to audit everything against.
"""

from .analysis import (
    ComparisonRow,
    InterferenceReport,
    compare_gaia_oracle,
    p34,
    p34_zeros,
    s4_closed_form,
)
from .errors import (
    BranchTrackingFailure,
    ConditioningWarning,
    DegenerateCrossing,
    DegenerateOffset,
    DuplicateOffset,
    GaialzError,
    NonHermitianInput,
    NonPositiveParameter,
    RealityViolation,
    RuntimeFailure,
    ShapeMismatch,
    StepLimitExceeded,
    ValidationError,
)
from .exact_oracle import (
    PropagationTrace,
    PropagatorConfig,
    default_window,
    propagate_exact,
)
from .gaia_grid import (
    RED_REGION_THRESHOLD,
    PhaseBreakdown,
    SMatrix,
    gaia_validity_margin,
    kappa_grid,
    lz_probability,
    smatrix_grid,
    theta_grid,
    unitary_factor,
)
from .gaia_lzsm import (
    CrossingSchedule,
    DestructiveCondition,
    StepUnitary,
    crossing_schedule,
    destructive_condition,
    nonlocal_theta_lzsm,
    nonlocal_theta_product,
    propagate_lzsm,
    solve_destructive,
    step_unitary,
    theta_lzsm,
    zeta,
)
from .legacy_wkb import (
    AiaPath,
    ConnectionFactor,
    NormalizationLadder,
    aia_path,
    branch_rank,
    m_factor,
    normalization_ladders,
    smatrix_aia,
    smatrix_legacy,
    stokes_phase,
    verify_appendix_identity,
)
from .models import (
    Crossing,
    GridModel,
    LzsmModel,
    build_grid,
    build_interference_grid,
    build_lzsm,
    build_spin_boson,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Crossing",
    "GridModel",
    "LzsmModel",
    "build_grid",
    "build_lzsm",
    "build_spin_boson",
    "build_interference_grid",
    "SMatrix",
    "PhaseBreakdown",
    "RED_REGION_THRESHOLD",
    "kappa_grid",
    "lz_probability",
    "theta_grid",
    "unitary_factor",
    "smatrix_grid",
    "gaia_validity_margin",
    "ConnectionFactor",
    "NormalizationLadder",
    "AiaPath",
    "m_factor",
    "normalization_ladders",
    "smatrix_legacy",
    "verify_appendix_identity",
    "stokes_phase",
    "branch_rank",
    "aia_path",
    "smatrix_aia",
    "PropagatorConfig",
    "PropagationTrace",
    "default_window",
    "propagate_exact",
    "CrossingSchedule",
    "StepUnitary",
    "DestructiveCondition",
    "zeta",
    "theta_lzsm",
    "nonlocal_theta_lzsm",
    "nonlocal_theta_product",
    "crossing_schedule",
    "step_unitary",
    "propagate_lzsm",
    "destructive_condition",
    "solve_destructive",
    "InterferenceReport",
    "ComparisonRow",
    "s4_closed_form",
    "p34",
    "p34_zeros",
    "compare_gaia_oracle",
    "GaialzError",
    "ValidationError",
    "RuntimeFailure",
    "DuplicateOffset",
    "NonPositiveParameter",
    "RealityViolation",
    "DegenerateOffset",
    "DegenerateCrossing",
    "ShapeMismatch",
    "BranchTrackingFailure",
    "StepLimitExceeded",
    "NonHermitianInput",
    "ConditioningWarning",
]
