"""
Galton-Watson processes in varying environment: sampling as degree schedules,
drift statistics, their limit conditions, and limit parameter extraction.
"""

from .drift import (
    CandidateJump,
    ContinuityGap,
    DriftConvergenceReport,
    DriftStats,
    GridFunction,
    JumpGap,
    LimitCandidate,
    beta_tilde,
    check_A1_A2,
    check_A3,
    drift_stats,
    mu_atoms,
    plugin_beta_tilde,
    write_drift_csv,
)
from .environment import (
    Environment,
    environment_from_spec,
    load_environment,
    save_environment,
    with_generation,
)
from .extraction import detect_jumps, extract_limit_params
from .process import (
    RescaledPath,
    TightnessFrequency,
    gwve_tightness_frequency,
    sample_gwve,
    sample_path,
    survival_frequency,
    write_path_csv,
)

__all__ = [
    "CandidateJump",
    "ContinuityGap",
    "DriftConvergenceReport",
    "DriftStats",
    "Environment",
    "GridFunction",
    "JumpGap",
    "LimitCandidate",
    "RescaledPath",
    "TightnessFrequency",
    "beta_tilde",
    "check_A1_A2",
    "check_A3",
    "detect_jumps",
    "drift_stats",
    "environment_from_spec",
    "extract_limit_params",
    "gwve_tightness_frequency",
    "load_environment",
    "mu_atoms",
    "plugin_beta_tilde",
    "sample_gwve",
    "sample_path",
    "save_environment",
    "survival_frequency",
    "with_generation",
    "write_drift_csv",
    "write_path_csv",
]
