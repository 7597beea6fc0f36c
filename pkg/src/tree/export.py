"""
Tree exports.

CSV: one line per vertex, columns height, child_index, parent_index
(1-based indices; the root line is 0, 1, 0).

Binary: little-endian 32-bit unsigned integers: h, then for each height
i = 1..h the count D_{i-1} followed by the 1-based parent indices.
"""

import csv
from pathlib import Path
from typing import Union

import numpy as np

from ..core.exceptions import OutputError
from .tree import Tree

PathLike = Union[str, Path]


def write_tree_csv(tree: Tree, path: PathLike) -> Path:
    path = Path(path)
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["height", "child_index", "parent_index"])
            writer.writerow([0, 1, 0])
            for i in range(1, tree.height + 1):
                for c, parent in enumerate(tree.parents[i], start=1):
                    writer.writerow([i, c, int(parent) + 1])
    except OSError as e:
        raise OutputError(f"Cannot write tree file {path}: {e}") from e
    return path


def tree_to_bytes(tree: Tree) -> bytes:
    chunks = [np.array([tree.height], dtype="<u4").tobytes()]
    for i in range(1, tree.height + 1):
        chunks.append(np.array([len(tree.parents[i])], dtype="<u4").tobytes())
        chunks.append((tree.parents[i] + 1).astype("<u4").tobytes())
    return b"".join(chunks)


def write_tree_binary(tree: Tree, path: PathLike) -> Path:
    path = Path(path)
    try:
        path.write_bytes(tree_to_bytes(tree))
    except OSError as e:
        raise OutputError(f"Cannot write tree file {path}: {e}") from e
    return path


def read_tree_parents(data: bytes) -> list:
    """Parent arrays (1-based) per height 1..h from the binary format."""
    values = np.frombuffer(data, dtype="<u4")
    h, cursor, parents = int(values[0]), 1, []
    for _ in range(h):
        size = int(values[cursor])
        parents.append(values[cursor + 1: cursor + 1 + size].astype(np.int64))
        cursor += 1 + size
    return parents
