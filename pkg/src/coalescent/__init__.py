"""
Coalescents of k labelled vertices: the discrete genealogy read from a sampled
tree, and the continuous growth-coalescent driven by (nu, rho, Theta).
"""

from .discrete import (
    GenealogyTrace,
    MergeEvent,
    active_line_counts,
    classify_events,
    partition_path,
    small_merge_probability,
    trace_arrays,
    trace_genealogy,
    trace_to_jsonl,
)
from .limit import (
    CoalescentRandomness,
    LimitEvent,
    LimitTrace,
    TightGPReport,
    check_tight_gp,
    continuous_leaf_tightness_curve,
    draw_randomness,
    first_merge_waiting_time,
    leaf_tightness_stat_continuous,
    limit_distance_matrix,
    limit_trace_to_jsonl,
    replay,
    restrict,
    sample_coalescent,
    uniform_constant_rate_pair_distance,
)
from .params import LimitParams, NuSpec, RhoSpec, load_params, save_params

__all__ = [
    "CoalescentRandomness",
    "GenealogyTrace",
    "LimitEvent",
    "LimitParams",
    "LimitTrace",
    "MergeEvent",
    "NuSpec",
    "RhoSpec",
    "TightGPReport",
    "active_line_counts",
    "check_tight_gp",
    "continuous_leaf_tightness_curve",
    "classify_events",
    "draw_randomness",
    "first_merge_waiting_time",
    "leaf_tightness_stat_continuous",
    "limit_distance_matrix",
    "limit_trace_to_jsonl",
    "load_params",
    "partition_path",
    "replay",
    "restrict",
    "sample_coalescent",
    "save_params",
    "small_merge_probability",
    "trace_arrays",
    "trace_genealogy",
    "trace_to_jsonl",
    "uniform_constant_rate_pair_distance",
]
