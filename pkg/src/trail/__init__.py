"""
k-trails of sampled trees and the Hausdorff and leaf-tightness statistics.
"""

from .tightness import (
    discrete_leaf_tightness_curve,
    distances_to_set,
    hausdorff_to_tree,
    leaf_tightness_stat,
    strong_leaf_tightness_curve,
    write_curve_csv,
)
from .trail import Trail, build_trail, check_trail, write_trail_csv

__all__ = [
    "Trail",
    "build_trail",
    "check_trail",
    "discrete_leaf_tightness_curve",
    "distances_to_set",
    "hausdorff_to_tree",
    "leaf_tightness_stat",
    "strong_leaf_tightness_curve",
    "write_curve_csv",
    "write_trail_csv",
]
