"""
Uniform random trees with a prescribed degree schedule.

A tree stores, for every height i >= 1, a flat array mapping the 0-based child
position c in [0, D_{i-1}) to the 0-based position of its parent at height
i - 1. Sampling shuffles the slot multiset of each height (parent j repeated
d_{i,j} times) and hands child c the c-th slot, which is uniform over all
attachments giving (i, j) exactly d_{i,j} children.

Public queries take and return 1-based VertexRef values; the array-level
helpers used by the Monte Carlo loops work with 0-based positions.
"""

from functools import cached_property
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.sparse import csr_matrix

from ..core.exceptions import ScheduleValidationError
from ..core.models import VertexRef
from ..schedule.schedule import DegreeSchedule, validate


class Tree:
    """
    Immutable sampled tree realizing a degree schedule.

    Attributes:
        schedule (DegreeSchedule): The generating schedule
        parents (Tuple[np.ndarray, ...]): parents[i][c] is the 0-based parent
            position of child c at height i; parents[0] is empty

    Examples:
        >>> from ..schedule import path_schedule
        >>> tree = sample_tree(path_schedule(3), np.random.default_rng(0))
        >>> father(tree, VertexRef(2, 1))
        VertexRef(height=1, index=1)
    """

    def __init__(self, schedule: DegreeSchedule, parents: Sequence[np.ndarray]):
        if len(parents) != schedule.h + 1:
            raise ValueError(
                f"Expected {schedule.h + 1} parent arrays, got {len(parents)}"
            )
        frozen = []
        for array in parents:
            array = np.asarray(array, dtype=np.int64)
            array.setflags(write=False)
            frozen.append(array)
        self.schedule = schedule
        self.parents: Tuple[np.ndarray, ...] = tuple(frozen)

    @property
    def height(self) -> int:
        return self.schedule.h

    def generation_size(self, i: int) -> int:
        return self.schedule.generation_size(i) if 0 <= i <= self.height else 0

    @property
    def vertex_count(self) -> int:
        return self.schedule.total_vertices

    @cached_property
    def offsets(self) -> np.ndarray:
        """Global id of the first vertex of each height (plus a final total)."""
        sizes = [self.generation_size(i) for i in range(self.height + 1)]
        return np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)

    @cached_property
    def _children_index(self) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
        # per height i: (children of height i+1 sorted by parent, start offsets per vertex)
        index = []
        for i in range(self.height):
            order = np.argsort(self.parents[i + 1], kind="stable")
            degrees = np.zeros(self.generation_size(i), dtype=np.int64)
            positive = self.schedule.degrees(i)
            degrees[: len(positive)] = positive
            starts = np.concatenate([[0], np.cumsum(degrees)])
            index.append((order, starts))
        return tuple(index)

    def children_positions(self, i: int, j0: int) -> np.ndarray:
        """0-based positions at height i+1 of the children of (i, j0), slot order."""
        if i >= self.height:
            return np.zeros(0, dtype=np.int64)
        order, starts = self._children_index[i]
        return order[starts[j0]: starts[j0 + 1]]

    def global_ids(self, heights: np.ndarray, positions: np.ndarray) -> np.ndarray:
        return self.offsets[heights] + positions

    def lift(self, heights: np.ndarray, positions: np.ndarray, level: int) -> np.ndarray:
        """Positions at `level` of the ancestors of vertices at or above it."""
        heights = np.asarray(heights)
        current = np.asarray(positions, dtype=np.int64).copy()
        for i in range(int(heights.max(initial=level)), level, -1):
            moving = heights >= i
            current[moving] = self.parents[i][current[moving]]
        return current

    @cached_property
    def adjacency(self) -> csr_matrix:
        """Undirected unit-weight adjacency over global vertex ids."""
        rows, cols = [], []
        for i in range(1, self.height + 1):
            rows.append(self.offsets[i] + np.arange(self.generation_size(i)))
            cols.append(self.offsets[i - 1] + self.parents[i])
        if rows:
            child = np.concatenate(rows)
            parent = np.concatenate(cols)
        else:
            child = parent = np.zeros(0, dtype=np.int64)
        n = self.vertex_count
        upper = csr_matrix((np.ones(len(child)), (child, parent)), shape=(n, n))
        return (upper + upper.T).tocsr()

    def key(self) -> bytes:
        """Byte string identifying the parent assignment."""
        return b"".join(p.tobytes() for p in self.parents)

    def resample_below(self, max_height: int, rng: np.random.Generator) -> "Tree":
        """
        Copy of the tree with the attachments of heights 1..max_height redrawn.

        Attachments above max_height are shared with this tree.
        """
        parents = list(self.parents)
        for i in range(1, min(max_height, self.height) + 1):
            parents[i] = _shuffle_slots(self.schedule, i - 1, rng)
        return Tree(self.schedule, parents)


def _shuffle_slots(schedule: DegreeSchedule, i: int, rng: np.random.Generator) -> np.ndarray:
    degrees = schedule.degrees(i)
    slots = np.repeat(np.arange(len(degrees), dtype=np.int64), degrees)
    return rng.permutation(slots)


def sample_tree(schedule: DegreeSchedule, rng: np.random.Generator) -> Tree:
    """
    Sample a uniform tree realizing a valid schedule.

    Heights are sampled independently in increasing order from the given
    stream; a fixed seed reproduces the tree bit for bit.

    Raises:
        ScheduleValidationError: If the schedule is invalid
    """
    report = validate(schedule)
    if not report.is_valid:
        raise ScheduleValidationError(
            f"Cannot sample an invalid schedule: {'; '.join(report.messages())}", report
        )
    parents: List[np.ndarray] = [np.zeros(0, dtype=np.int64)]
    for i in range(schedule.h):
        parents.append(_shuffle_slots(schedule, i, rng))
    logger.debug(f"Sampled tree with {schedule.total_vertices} vertices, height {schedule.h}")
    return Tree(schedule, parents)


def _check_vertex(tree: Tree, v: VertexRef) -> None:
    if not 0 <= v.height <= tree.height or not 1 <= v.index <= tree.generation_size(v.height):
        raise ValueError(f"{v} is not a vertex of this tree")


def father(tree: Tree, v: VertexRef) -> VertexRef:
    """
    Parent of a non-root vertex.

    Raises:
        ValueError: If v is the root ("root has no father") or not in the tree
    """
    _check_vertex(tree, v)
    if v.height == 0:
        raise ValueError("root has no father")
    return VertexRef(v.height - 1, int(tree.parents[v.height][v.index - 1]) + 1)


def ancestor(tree: Tree, v: VertexRef, steps: int) -> VertexRef:
    """The `steps`-fold father of v."""
    _check_vertex(tree, v)
    if not 0 <= steps <= v.height:
        raise ValueError(f"steps must lie in [0, {v.height}], got {steps}")
    position = v.index - 1
    for i in range(v.height, v.height - steps, -1):
        position = int(tree.parents[i][position])
    return VertexRef(v.height - steps, position + 1)


def children(tree: Tree, v: VertexRef) -> List[VertexRef]:
    """Children of v in slot order."""
    _check_vertex(tree, v)
    return [VertexRef(v.height + 1, int(c) + 1) for c in tree.children_positions(v.height, v.index - 1)]


def lca(tree: Tree, u: VertexRef, v: VertexRef) -> VertexRef:
    """Deepest common ancestor: lift the higher vertex, then step in lockstep."""
    _check_vertex(tree, u)
    _check_vertex(tree, v)
    if u.height > v.height:
        u = ancestor(tree, u, u.height - v.height)
    elif v.height > u.height:
        v = ancestor(tree, v, v.height - u.height)
    a, b, i = u.index - 1, v.index - 1, u.height
    while a != b:
        a = int(tree.parents[i][a])
        b = int(tree.parents[i][b])
        i -= 1
    return VertexRef(i, a + 1)


def distance(tree: Tree, u: VertexRef, v: VertexRef) -> int:
    return u.height + v.height - 2 * lca(tree, u, v).height


def sample_vertex_arrays(
    tree: Tree, k: int, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """k i.i.d. uniform vertices as (heights, 0-based positions)."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    ids = rng.integers(0, tree.vertex_count, size=k)
    heights = np.searchsorted(tree.offsets, ids, side="right") - 1
    return heights.astype(np.int64), (ids - tree.offsets[heights]).astype(np.int64)


def sample_uniform_vertices(tree: Tree, k: int, rng: np.random.Generator) -> List[VertexRef]:
    """k i.i.d. vertices uniform over all 1 + sum D_i vertices, root included."""
    heights, positions = sample_vertex_arrays(tree, k, rng)
    return [VertexRef(int(i), int(j) + 1) for i, j in zip(heights, positions)]


def to_arrays(vertices: Sequence[VertexRef]) -> Tuple[np.ndarray, np.ndarray]:
    heights = np.array([v.height for v in vertices], dtype=np.int64)
    positions = np.array([v.index - 1 for v in vertices], dtype=np.int64)
    return heights, positions


def coalesce_lines(
    tree: Tree, heights: np.ndarray, positions: np.ndarray
) -> Iterator[Tuple[int, int, List[np.ndarray]]]:
    """
    Sweep the ancestor lines of k vertices from the top of the tree to the root.

    Labels are 0-based indices into the input arrays. A line becomes active
    at its own height; lines sitting at one vertex form a cluster. Whenever
    two or more clusters reach the same vertex, the sweep yields
    (height, 0-based position, clusters) with each cluster as a sorted label
    array, then continues with their union.

    Yields:
        Tuple[int, int, List[np.ndarray]]: one item per merge vertex, by
        non-increasing height and increasing position within a height
    """
    k = len(heights)
    if k == 0:
        return
    order = np.argsort(-heights, kind="stable")
    clusters: List[np.ndarray] = []
    where = np.zeros(0, dtype=np.int64)
    next_label = 0
    top = int(heights[order[0]])

    for level in range(top, -1, -1):
        born = []
        while next_label < k and heights[order[next_label]] == level:
            born.append(int(order[next_label]))
            next_label += 1
        if born:
            clusters.extend(np.array([label]) for label in born)
            where = np.concatenate([where, positions[born]])

        if len(clusters) > 1:
            values, inverse, counts = np.unique(where, return_inverse=True, return_counts=True)
            if len(values) < len(clusters):
                merged_clusters: List[np.ndarray] = []
                for slot, value in enumerate(values):
                    members = np.flatnonzero(inverse == slot)
                    if counts[slot] > 1:
                        parts = [clusters[m] for m in members]
                        yield level, int(value), parts
                        merged_clusters.append(np.sort(np.concatenate(parts)))
                    else:
                        merged_clusters.append(clusters[members[0]])
                clusters, where = merged_clusters, values.astype(np.int64)

        if len(clusters) == 1 and next_label == k:
            return
        if level > 0:
            where = tree.parents[level][where]


def distance_matrix(tree: Tree, vertices: Sequence[VertexRef]) -> np.ndarray:
    """Pairwise graph distances of the given vertices (symmetric, zero diagonal)."""
    for v in vertices:
        _check_vertex(tree, v)
    heights, positions = to_arrays(vertices)
    return distance_matrix_arrays(tree, heights, positions)


def merge_height_matrix(tree: Tree, heights: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """c(q, r): height of the nearest common ancestor; c(q, q) is q's height."""
    k = len(heights)
    c = np.full((k, k), -1, dtype=np.int64)
    np.fill_diagonal(c, heights)
    for level, _, parts in coalesce_lines(tree, heights, positions):
        for a in range(len(parts)):
            for b in range(a + 1, len(parts)):
                c[np.ix_(parts[a], parts[b])] = level
                c[np.ix_(parts[b], parts[a])] = level
    return c


def distance_matrix_arrays(
    tree: Tree, heights: np.ndarray, positions: np.ndarray, c: Optional[np.ndarray] = None
) -> np.ndarray:
    if c is None:
        c = merge_height_matrix(tree, heights, positions)
    return heights[:, None] + heights[None, :] - 2 * c
