"""
Two-sample comparisons of distance-matrix ensembles and convergence reports.
"""

from .report import (
    ConvergenceReport,
    Diagnostic,
    ReportThresholds,
    check_diagnostic,
    convergence_report,
    gap_diagnostic,
    p_value_diagnostic,
    schedule_diagnostics,
    write_report,
)
from .statistics import (
    MatrixEnsemble,
    atom_cloud_gap,
    cdf_from_density,
    energy_distance,
    ks_1d,
    load_ensemble,
    pair_distances,
    save_ensemble,
    weak_convergence_gap,
    weak_leaf_tightness,
)

__all__ = [
    "ConvergenceReport",
    "Diagnostic",
    "MatrixEnsemble",
    "ReportThresholds",
    "atom_cloud_gap",
    "cdf_from_density",
    "check_diagnostic",
    "convergence_report",
    "energy_distance",
    "gap_diagnostic",
    "ks_1d",
    "load_ensemble",
    "p_value_diagnostic",
    "pair_distances",
    "save_ensemble",
    "schedule_diagnostics",
    "weak_convergence_gap",
    "weak_leaf_tightness",
    "write_report",
]
