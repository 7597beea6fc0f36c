"""
SVG rendering of sampled trees.

Vertices sit at (rank within height / generation size, height) in plane order:
children are ordered by their parent's rank, then by slot. Edges and vertices
are coloured by height on a green-to-red ramp, low vertices green.
"""

from pathlib import Path
from typing import List, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from loguru import logger  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402

from ..core.exceptions import OutputError  # noqa: E402
from .tree import Tree  # noqa: E402

PathLike = Union[str, Path]


def plane_layout(tree: Tree) -> List[np.ndarray]:
    """x coordinate in [0, 1] of every vertex, per height."""
    ranks = [np.zeros(1, dtype=np.int64)]
    for i in range(1, tree.height + 1):
        parent_rank = ranks[-1][tree.parents[i]]
        order = np.lexsort((np.arange(len(parent_rank)), parent_rank))
        rank = np.empty(len(order), dtype=np.int64)
        rank[order] = np.arange(len(order))
        ranks.append(rank)
    return [(rank + 0.5) / len(rank) for rank in ranks]


def render_svg(tree: Tree, path: PathLike, width: float = 8.0, height: float = 6.0) -> Path:
    """
    Draw the tree to an SVG file; output bytes depend only on the tree.

    Raises:
        OutputError: If the file cannot be written
    """
    path = Path(path)
    xs = plane_layout(tree)
    top = max(tree.height, 1)
    cmap = plt.get_cmap("RdYlGn_r")

    segments, colors = [], []
    for i in range(1, tree.height + 1):
        child_x = xs[i]
        parent_x = xs[i - 1][tree.parents[i]]
        segments.extend(
            [((px, i - 1), (cx, i)) for px, cx in zip(parent_x, child_x)]
        )
        colors.extend([cmap((i - 0.5) / top)] * len(child_x))

    with matplotlib.rc_context({"svg.hashsalt": "treelab", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(width, height))
        ax.add_collection(LineCollection(segments, colors=colors, linewidths=0.4))
        vx = np.concatenate(xs)
        vy = np.concatenate([np.full(len(x), i) for i, x in enumerate(xs)])
        ax.scatter(vx, vy, c=cmap(vy / top), s=2, linewidths=0)
        ax.set_xlim(0, 1)
        ax.set_ylim(-0.5, tree.height + 0.5)
        ax.set_axis_off()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as e:
            raise OutputError(f"Cannot write SVG {path}: {e}") from e
        finally:
            plt.close(fig)

    logger.info(f"Rendered {tree.vertex_count} vertices to {path}")
    return path
