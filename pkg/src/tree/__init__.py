"""
Uniform random trees with fixed degrees and heights: sampling, queries,
enumeration, export and rendering.
"""

from .enumeration import count_trees, enumerate_trees
from .export import read_tree_parents, tree_to_bytes, write_tree_binary, write_tree_csv
from .render import plane_layout, render_svg
from .tree import (
    Tree,
    ancestor,
    children,
    coalesce_lines,
    distance,
    distance_matrix,
    distance_matrix_arrays,
    father,
    lca,
    merge_height_matrix,
    sample_tree,
    sample_uniform_vertices,
    sample_vertex_arrays,
    to_arrays,
)

__all__ = [
    "Tree",
    "ancestor",
    "children",
    "coalesce_lines",
    "count_trees",
    "distance",
    "distance_matrix",
    "distance_matrix_arrays",
    "enumerate_trees",
    "father",
    "lca",
    "merge_height_matrix",
    "plane_layout",
    "read_tree_parents",
    "render_svg",
    "sample_tree",
    "sample_uniform_vertices",
    "sample_vertex_arrays",
    "to_arrays",
    "tree_to_bytes",
    "write_tree_binary",
    "write_tree_csv",
]
