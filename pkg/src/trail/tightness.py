"""
Hausdorff and leaf-tightness statistics of sampled trees.
"""

import csv
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np
from loguru import logger
from scipy.sparse.csgraph import dijkstra

from ..coalescent.discrete import GenealogyTrace
from ..core.exceptions import OutputError
from ..core.models import CurvePoint
from ..schedule.schedule import DegreeSchedule
from ..tree.tree import Tree, merge_height_matrix, sample_tree, sample_vertex_arrays
from .trail import Trail


def distances_to_set(tree: Tree, global_ids: np.ndarray) -> np.ndarray:
    """Graph distance of every vertex to the nearest vertex of a set (multi-source BFS)."""
    sources = np.unique(global_ids)
    return dijkstra(tree.adjacency, directed=False, unweighted=True, indices=sources, min_only=True)


def hausdorff_to_tree(tree: Tree, trail: Trail) -> int:
    """max over vertices v of the distance from v to the trail."""
    ids = np.concatenate(
        [tree.offsets[i] + members for i, members in enumerate(trail.members)]
    )
    return int(distances_to_set(tree, ids).max())


def leaf_tightness_stat(trace: GenealogyTrace, x: float) -> int:
    """
    N_k(x): labels born at height >= x whose line has met no other line
    at a height >= x.
    """
    if x < 0:
        raise ValueError(f"x must be non-negative, got {x}")
    return _count_isolated(trace.merge_heights, trace.birth_heights, x)


def _count_isolated(merge_heights: np.ndarray, births: np.ndarray, x: float) -> int:
    c = merge_heights.astype(float)
    np.fill_diagonal(c, -np.inf)
    isolated = c.max(axis=1, initial=-np.inf) < x
    return int(np.sum((births >= x) & isolated))


def strong_leaf_tightness_curve(
    tree: Tree,
    rng: np.random.Generator,
    k_grid: Sequence[int],
    delta: float,
    replicates: int = 200,
) -> List[CurvePoint]:
    """
    Estimate P(d_H(tree, {V_1..V_k}) > delta n) for each k.

    Args:
        tree: Sampled tree
        rng: Random stream for the vertex draws
        k_grid: Sample sizes (nonempty)
        delta: Fraction of n in (0, 1)
        replicates: Draws per k
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not k_grid:
        raise ValueError("k_grid must not be empty")
    bound = delta * tree.schedule.n
    curve: List[CurvePoint] = []
    for k in k_grid:
        hits = 0
        for _ in range(replicates):
            heights, positions = sample_vertex_arrays(tree, k, rng)
            spread = distances_to_set(tree, tree.global_ids(heights, positions)).max()
            hits += int(spread > bound)
        p = hits / replicates
        curve.append(CurvePoint(k=k, estimate=p, stderr=float(np.sqrt(p * (1 - p) / replicates))))
        logger.debug(f"strong leaf tightness k={k}: {p:.4f}")
    return curve


def discrete_leaf_tightness_curve(
    schedule: DegreeSchedule,
    rng: np.random.Generator,
    k_grid: Sequence[int],
    x_fraction: float,
    replicates: int,
) -> List[CurvePoint]:
    """
    Mean of N_k(x n) / k over fresh (tree, k vertices) samples, per k.
    """
    x = x_fraction * schedule.n
    curve: List[CurvePoint] = []
    for k in k_grid:
        ratios = np.empty(replicates)
        for r in range(replicates):
            tree = sample_tree(schedule, rng)
            heights, positions = sample_vertex_arrays(tree, k, rng)
            c = merge_height_matrix(tree, heights, positions)
            ratios[r] = _count_isolated(c, heights, x) / k
        curve.append(
            CurvePoint(k=k, estimate=float(ratios.mean()), stderr=float(ratios.std(ddof=1) / np.sqrt(replicates)) if replicates > 1 else 0.0)
        )
    return curve


def write_curve_csv(curve: Sequence[CurvePoint], path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["k", "estimate", "stderr"])
            for point in curve:
                writer.writerow([point.k, repr(point.estimate), repr(point.stderr)])
    except OSError as e:
        raise OutputError(f"Cannot write curve file {path}: {e}") from e
    return path
