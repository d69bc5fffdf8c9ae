"""Coalescence hidden-variable fractal interpolation.

Builds interpolants whose graph is the attractor of a contracting system
with one hidden coordinate, evaluates them exactly or iteratively,
approximates them through integral moments, classifies their Holder
smoothness regime, and bounds/estimates the fractal dimension of the graph.
"""

from .attractor import (
    Address,
    IterationResult,
    SampledGraph,
    apply_operator,
    chaos_game,
    exact_residuals,
    fixed_point_iterate,
    functional_residuals,
    interval_of,
    sample_exact,
)
from .dimension import (
    DimensionOneResult,
    DimensionReport,
    EmpiricalDimension,
    TheoreticalBounds,
    box_count,
    dimension_one_predicate,
    dimension_report,
    estimate_dimension,
    theoretical_bounds,
)
from .exceptions import (
    ChfifError,
    ConfigError,
    DegenerateExponentError,
    DepthLimitError,
    InsufficientScalesError,
    SamplingTooCoarseError,
    ValidationError,
)
from .geometry import (
    ChfifModel,
    InterpolationProblem,
    IntervalParams,
    PowerTerm,
    RatioSummary,
    ValidationResult,
    Violation,
    classification_ratios,
    is_equidistant,
    is_self_affine_config,
    self_affine_discrepancies,
    solve_model,
    validate,
)
from .moments import (
    MomentTable,
    address_of,
    build_moment_table,
    convergence_profile,
    moment_a,
    moment_b,
    q_m_operator,
    q_m_values,
    whole_interval_integrals,
)
from .smoothness import (
    HolderEstimate,
    SmoothnessReport,
    TauBounds,
    classify,
    empirical_holder,
    max_oscillation,
    regime_state,
    remark_special_case,
)

__version__ = "0.1.0"

__all__ = [
    "Address",
    "ChfifError",
    "ChfifModel",
    "ConfigError",
    "DegenerateExponentError",
    "DepthLimitError",
    "DimensionOneResult",
    "DimensionReport",
    "EmpiricalDimension",
    "HolderEstimate",
    "InsufficientScalesError",
    "InterpolationProblem",
    "IntervalParams",
    "IterationResult",
    "MomentTable",
    "PowerTerm",
    "RatioSummary",
    "SampledGraph",
    "SamplingTooCoarseError",
    "SmoothnessReport",
    "TauBounds",
    "TheoreticalBounds",
    "ValidationError",
    "ValidationResult",
    "Violation",
    "address_of",
    "apply_operator",
    "box_count",
    "build_moment_table",
    "chaos_game",
    "classification_ratios",
    "classify",
    "convergence_profile",
    "dimension_one_predicate",
    "dimension_report",
    "empirical_holder",
    "exact_residuals",
    "estimate_dimension",
    "fixed_point_iterate",
    "functional_residuals",
    "interval_of",
    "is_equidistant",
    "is_self_affine_config",
    "max_oscillation",
    "moment_a",
    "moment_b",
    "q_m_operator",
    "q_m_values",
    "regime_state",
    "remark_special_case",
    "sample_exact",
    "self_affine_discrepancies",
    "solve_model",
    "theoretical_bounds",
    "validate",
    "whole_interval_integrals",
]
