"""
Genealogy of k vertices of a sampled tree, read as a discrete coalescent.

Label r (1-based) is born at the height of its vertex V_r and follows the
ancestor line of V_r towards the root. The block of a label holds every label
whose line has joined it; when lines meet at a vertex the smallest label keeps
the union and the others become empty. One MergeEvent is recorded per meeting
vertex, however many blocks meet there, together with the degree ratio
d/D of that vertex.
"""

import json
from dataclasses import dataclass
from math import comb
from typing import FrozenSet, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..core.models import VertexRef
from ..schedule.schedule import DegreeSchedule
from ..tree.tree import Tree, coalesce_lines, to_arrays


class MergeEvent(BaseModel):
    """
    Meeting of two or more blocks at one vertex.

    Attributes:
        height: Height of the meeting vertex
        merged_labels: All labels of the merged blocks (1-based)
        surviving_label: Smallest participating label; it keeps the union
        merge_vertex: The meeting vertex
        degree_ratio: d / D_i of the meeting vertex
    """

    model_config = {"frozen": True}

    height: int = Field(ge=0)
    merged_labels: Tuple[int, ...]
    surviving_label: int
    merge_vertex: VertexRef
    degree_ratio: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def validate_labels(self) -> "MergeEvent":
        if len(self.merged_labels) < 2:
            raise ValueError(
                f"A merge needs at least two labels, got {self.merged_labels}"
            )
        if self.surviving_label not in self.merged_labels:
            raise ValueError(
                f"Survivor {self.surviving_label} is not among {self.merged_labels}"
            )
        return self


@dataclass(frozen=True)
class GenealogyTrace:
    """
    Partition-valued genealogy of k labelled vertices.

    Attributes:
        k: Number of labels
        birth_heights: h(V_r) per label
        events: Merge events by non-increasing height
        merge_heights: c(q, r), height of the nearest common ancestor
    """

    k: int
    birth_heights: np.ndarray
    events: Tuple[MergeEvent, ...]
    merge_heights: np.ndarray

    def distances(self) -> np.ndarray:
        b = self.birth_heights
        return b[:, None] + b[None, :] - 2 * self.merge_heights


def trace_genealogy(tree: Tree, vertices: Sequence[VertexRef]) -> GenealogyTrace:
    """
    Follow the ancestor lines of `vertices` down to the root.

    Args:
        tree: Sampled tree
        vertices: V_1, ..., V_k (k >= 1)

    Returns:
        GenealogyTrace: events and merge heights of the k lines
    """
    if not vertices:
        raise ValueError("trace_genealogy needs at least one vertex")
    heights, positions = to_arrays(vertices)
    return trace_arrays(tree, heights, positions)


def trace_arrays(tree: Tree, heights: np.ndarray, positions: np.ndarray) -> GenealogyTrace:
    """trace_genealogy on (heights, 0-based positions) arrays."""
    k = len(heights)
    schedule = tree.schedule
    c = np.full((k, k), -1, dtype=np.int64)
    np.fill_diagonal(c, heights)
    events: List[MergeEvent] = []
    for level, position, parts in coalesce_lines(tree, heights, positions):
        for a in range(len(parts)):
            for b in range(a + 1, len(parts)):
                c[np.ix_(parts[a], parts[b])] = level
                c[np.ix_(parts[b], parts[a])] = level
        labels = tuple(sorted(int(label) + 1 for part in parts for label in part))
        D = schedule.row_sum(level)
        degree = schedule.degree_of(level, position + 1)
        events.append(
            MergeEvent(
                height=level,
                merged_labels=labels,
                surviving_label=labels[0],
                merge_vertex=VertexRef(level, position + 1),
                degree_ratio=degree / D if D else 0.0,
            )
        )
    return GenealogyTrace(
        k=k,
        birth_heights=np.asarray(heights, dtype=np.int64),
        events=tuple(events),
        merge_heights=c,
    )


def partition_path(trace: GenealogyTrace, i: int) -> Tuple[FrozenSet[int], ...]:
    """
    Blocks of the genealogy at height i, indexed by label.

    Entry r - 1 is the block of label r: {s : c(r, s) >= i} when r is the
    smallest label of that set, and empty otherwise or when r is unborn at i.
    """
    if i < 0:
        raise ValueError(f"height must be non-negative, got {i}")
    blocks: List[FrozenSet[int]] = []
    for r in range(trace.k):
        members = np.flatnonzero(trace.merge_heights[r] >= i)
        if len(members) == 0 or members[0] != r:
            blocks.append(frozenset())
        else:
            blocks.append(frozenset(int(s) + 1 for s in members))
    return tuple(blocks)


def small_merge_probability(schedule: DegreeSchedule, i: int, threshold: float = 1.0) -> float:
    """
    Probability that two fixed vertices at height i + 1 share a parent of
    degree at most threshold * D_i.

    Raises:
        ValueError: If D_i < 2
    """
    D_i = schedule.row_sum(i)
    if D_i < 2:
        raise ValueError(f"D_{i} = {D_i}: two distinct vertices at height {i + 1} do not exist")
    pairs = comb(D_i, 2)
    return sum(
        count * comb(degree, 2) / pairs
        for degree, count in schedule.row(i)
        if degree <= threshold * D_i
    )


def classify_events(
    trace: GenealogyTrace, threshold: float
) -> Tuple[Tuple[MergeEvent, ...], Tuple[MergeEvent, ...]]:
    """Split events into (small, large) by degree ratio <= threshold."""
    small = tuple(e for e in trace.events if e.degree_ratio <= threshold)
    large = tuple(e for e in trace.events if e.degree_ratio > threshold)
    return small, large


def active_line_counts(trace: GenealogyTrace, heights: Sequence[int]) -> List[int]:
    """Number of nonempty blocks at each requested height."""
    return [sum(1 for block in partition_path(trace, i) if block) for i in heights]


def trace_to_jsonl(trace: GenealogyTrace) -> str:
    lines = [
        json.dumps(
            {
                "height": e.height,
                "labels": list(e.merged_labels),
                "survivor": e.surviving_label,
                "vertex": [e.merge_vertex.height, e.merge_vertex.index],
                "ratio": e.degree_ratio,
            }
        )
        for e in trace.events
    ]
    return "\n".join(lines) + ("\n" if lines else "")

