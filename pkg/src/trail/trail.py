"""
k-trails: father-closed subsets with min(k, D_{i-1}) vertices per height.

Trails are built one index j at a time, from the top of the tree down. Trail
j starts at a uniform unused top vertex and descends: at each height it takes
the father of its previous vertex if that father is not yet in the trail,
otherwise a uniform unused vertex, and once the height is saturated any
uniform vertex.

Height i draws only from its own child stream, so the members at heights
>= H are a function of those streams and of the attachments above H:
redrawing the attachments of heights 1..H leaves them unchanged. Trail j only
depends on trails 1..j - 1 and on its own draws, so building with k' >= k
from the same stream reproduces the k-trail as a prefix.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from loguru import logger

from ..core.exceptions import OutputError
from ..core.models import VertexRef
from ..core.streams import split_stream
from ..tree.tree import Tree


@dataclass(frozen=True)
class Trail:
    """
    Attributes:
        k: Trail index bound
        members: members[i] holds the 0-based positions X_{i,1..min(k, D_{i-1})}
    """

    k: int
    members: Tuple[np.ndarray, ...]

    def vertices(self, i: int) -> List[VertexRef]:
        return [VertexRef(i, int(j) + 1) for j in self.members[i]]

    def size(self) -> int:
        return int(sum(len(m) for m in self.members))


def build_trail(tree: Tree, k: int, rng: np.random.Generator) -> Trail:
    """
    Build the k-trail of a tree.

    Args:
        tree: Sampled tree
        k: Number of trails (>= 1)
        rng: Random stream; one child stream per height is spawned from it

    Returns:
        Trail: the nested construction restricted to its first k trails
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    top = tree.height
    sizes = [tree.generation_size(i) for i in range(top + 1)]
    used = [np.zeros(size, dtype=bool) for size in sizes]
    members: List[List[int]] = [[] for _ in range(top + 1)]
    streams = split_stream(rng, top + 1)

    def pick_unused(i: int) -> int:
        free = np.flatnonzero(~used[i])
        return int(free[streams[i].integers(len(free))])

    for j in range(1, min(k, max(sizes)) + 1):
        if j <= sizes[top]:
            current = pick_unused(top)
            used[top][current] = True
            members[top].append(current)
        else:
            current = int(streams[top].integers(sizes[top]))

        for i in range(top - 1, -1, -1):
            parent = int(tree.parents[i + 1][current])
            if j > sizes[i]:
                current = int(streams[i].integers(sizes[i]))
                continue
            current = parent if not used[i][parent] else pick_unused(i)
            used[i][current] = True
            members[i].append(current)

    logger.debug(f"Built {k}-trail with {sum(len(m) for m in members)} vertices")
    return Trail(k=k, members=tuple(np.array(m, dtype=np.int64) for m in members))


def check_trail(tree: Tree, trail: Trail) -> List[str]:
    """
    Structural violations of a trail: wrong count per height, repeated
    vertices, or a member X_{i,j} whose father is not among X_{i-1,1..j}.
    """
    problems: List[str] = []
    if len(trail.members) != tree.height + 1:
        return [f"trail covers {len(trail.members)} heights, tree has {tree.height + 1}"]
    for i, members in enumerate(trail.members):
        expected = min(trail.k, tree.generation_size(i))
        if len(members) != expected:
            problems.append(f"height {i}: {len(members)} vertices, expected {expected}")
        if len(np.unique(members)) != len(members):
            problems.append(f"height {i}: repeated vertex")
        if i == 0:
            continue
        slot_below = {int(v): s for s, v in enumerate(trail.members[i - 1])}
        for s, v in enumerate(members):
            parent = int(tree.parents[i][v])
            if slot_below.get(parent, len(members) + 1) > s:
                problems.append(f"height {i}: father of slot {s + 1} is not an earlier-or-equal slot below")
    return problems


def write_trail_csv(trail: Trail, path: Union[str, Path]) -> Path:
    """Columns height, slot, i, j (1-based slot and j)."""
    path = Path(path)
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["height", "slot", "i", "j"])
            for i, members in enumerate(trail.members):
                for slot, v in enumerate(members, start=1):
                    writer.writerow([i, slot, i, int(v) + 1])
    except OSError as e:
        raise OutputError(f"Cannot write trail file {path}: {e}") from e
    return path
