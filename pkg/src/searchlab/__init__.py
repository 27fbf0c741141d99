"""Noisy single-target search: simulation, inference, and bounds.

A target occupies one of M = B/delta cells of an interval of width B.
Each probe measures the indicator of a chosen cell subset through
additive Gaussian noise whose variance grows with the probed mass.
The package provides the measurement channel and its capacity, Bayesian
posterior tracking, adaptive and non-adaptive search strategies, sample
complexity bounds, Monte Carlo drivers, and a CLI for sweeps.
"""

from .bounds import (
    BoundReport,
    RegimeRatio,
    adaptive_upper_bound,
    adaptivity_gain_lower_bound,
    asymptotic_ratios,
    feasible_alphas,
    fixed_b_limit_constant,
    fixed_delta_limit_constant,
    general_f_bounds,
    nonadaptive_lower_bound,
    stage1_upper_bound,
    stage2_upper_bound,
)
from .channel import (
    AEtaResult,
    CapacityResult,
    bawgn_capacity,
    binary_entropy,
    capacity_point,
    gaussian_pdf,
    gaussian_tail,
    gaussian_tail_inverse,
    optimal_composition,
    psi,
    psi_component,
    sample_observation,
    solve_a_eta,
)
from .cli import main
from .errors import (
    DegeneratePosterior,
    EtaTooLarge,
    InvalidAlpha,
    InvalidEpsilon,
    InvalidNoiseModel,
    NoFeasibleAlpha,
    NonIntegerLocationCount,
    NonMonotoneNoise,
    NoRootInBracket,
    ParseError,
    ProbeCountOutOfRange,
    QuadratureNonConvergence,
    SearchLabError,
    SizeOne,
    StepLimitExceeded,
    ValidationError,
)
from .inference import (
    Posterior,
    bayes_update,
    init_uniform,
    map_estimate,
    u_functional,
)
from .model import (
    MeasurementVector,
    NoiseModel,
    SearchConfig,
    TargetLocation,
    TrialRecord,
    new_config,
    sample_target,
)
from .plan import ExperimentPlan, load_preset, parse_plan, run_plan
from .sim import (
    DriftReport,
    SummaryStats,
    drift_probe,
    run_single_trial,
    run_trials,
    trial_seed_for,
)
from .strategies import (
    EXHAUSTIVE,
    FIXED_COMPOSITION,
    KINDS,
    NOISY_BINARY_FIXED,
    NOISY_BINARY_VARIABLE,
    SORTED_PM,
    TWO_STAGE,
    StrategySpec,
    run_exhaustive,
    run_fixed_composition,
    run_noisy_binary_fixed,
    run_noisy_binary_variable,
    run_sorted_pm,
    run_strategy,
    run_two_stage,
)

__version__ = "0.1.0"

__all__ = [
    "AEtaResult",
    "BoundReport",
    "CapacityResult",
    "DegeneratePosterior",
    "DriftReport",
    "EXHAUSTIVE",
    "EtaTooLarge",
    "ExperimentPlan",
    "FIXED_COMPOSITION",
    "InvalidAlpha",
    "InvalidEpsilon",
    "InvalidNoiseModel",
    "KINDS",
    "MeasurementVector",
    "NOISY_BINARY_FIXED",
    "NOISY_BINARY_VARIABLE",
    "NoFeasibleAlpha",
    "NoiseModel",
    "NonIntegerLocationCount",
    "NonMonotoneNoise",
    "NoRootInBracket",
    "ParseError",
    "Posterior",
    "ProbeCountOutOfRange",
    "QuadratureNonConvergence",
    "RegimeRatio",
    "SORTED_PM",
    "SearchConfig",
    "SearchLabError",
    "SizeOne",
    "StepLimitExceeded",
    "StrategySpec",
    "SummaryStats",
    "TWO_STAGE",
    "TargetLocation",
    "TrialRecord",
    "ValidationError",
    "adaptive_upper_bound",
    "adaptivity_gain_lower_bound",
    "asymptotic_ratios",
    "bawgn_capacity",
    "bayes_update",
    "binary_entropy",
    "capacity_point",
    "drift_probe",
    "feasible_alphas",
    "fixed_b_limit_constant",
    "fixed_delta_limit_constant",
    "gaussian_pdf",
    "gaussian_tail",
    "gaussian_tail_inverse",
    "general_f_bounds",
    "init_uniform",
    "load_preset",
    "main",
    "map_estimate",
    "new_config",
    "nonadaptive_lower_bound",
    "optimal_composition",
    "parse_plan",
    "psi",
    "psi_component",
    "run_exhaustive",
    "run_fixed_composition",
    "run_noisy_binary_fixed",
    "run_noisy_binary_variable",
    "run_plan",
    "run_single_trial",
    "run_sorted_pm",
    "run_strategy",
    "run_trials",
    "run_two_stage",
    "sample_observation",
    "sample_target",
    "solve_a_eta",
    "stage1_upper_bound",
    "stage2_upper_bound",
    "trial_seed_for",
    "u_functional",
]
