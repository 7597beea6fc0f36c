"""
Unit tests for tree CSV / binary export and SVG rendering.
"""

import numpy as np
import pytest

from src.core.exceptions import OutputError
from src.core.streams import make_stream
from src.schedule.builders import from_profile, named_profile
from src.tree.export import read_tree_parents, tree_to_bytes, write_tree_binary, write_tree_csv
from src.tree.render import plane_layout, render_svg
from src.tree.tree import sample_tree


class TestTreeCsv:
    """One line per vertex."""

    def test_four_level_has_15_vertices(self, tmp_path, four_level, rng):
        """Header plus 1 + 4 + 5 + 3 + 2 lines."""
        path = write_tree_csv(sample_tree(four_level, rng), tmp_path / "tree.csv")

        lines = path.read_text().splitlines()

        assert lines[0] == "height,child_index,parent_index"
        assert lines[1] == "0,1,0"
        assert len(lines) == 16

    def test_parent_indices_are_one_based(self, tmp_path, four_level, rng):
        """Height-1 vertices all hang from the root."""
        path = write_tree_csv(sample_tree(four_level, rng), tmp_path / "tree.csv")

        rows = [line.split(",") for line in path.read_text().splitlines()[2:6]]

        assert all(row[0] == "1" and row[2] == "1" for row in rows)

    def test_same_seed_same_bytes(self, tmp_path, path10):
        """The path schedule with seed 7 writes identical files."""
        a = write_tree_csv(sample_tree(path10, make_stream(7)), tmp_path / "a.csv")
        b = write_tree_csv(sample_tree(path10, make_stream(7)), tmp_path / "b.csv")

        assert a.read_bytes() == b.read_bytes()

    def test_unwritable_path(self, tmp_path, four_level, rng):
        """Writing into a missing directory is an I/O error."""
        with pytest.raises(OutputError):
            write_tree_csv(sample_tree(four_level, rng), tmp_path / "missing" / "tree.csv")


class TestTreeBinary:
    """Little-endian uint32 layout."""

    def test_parents_read_back(self, tmp_path, four_level, rng):
        """Parent arrays survive the binary format (1-based)."""
        tree = sample_tree(four_level, rng)

        path = write_tree_binary(tree, tmp_path / "tree.bin")
        parents = read_tree_parents(path.read_bytes())

        assert len(parents) == tree.height
        for i, array in enumerate(parents, start=1):
            assert np.array_equal(array, tree.parents[i] + 1)

    def test_header(self, four_level, rng):
        """First word is h, then D_0."""
        data = np.frombuffer(tree_to_bytes(sample_tree(four_level, rng)), dtype="<u4")

        assert data[:2].tolist() == [4, 4]
        assert len(data) == 1 + 4 + 14


class TestRender:
    """SVG drawing."""

    def test_layout_is_in_unit_interval(self, four_level, rng):
        """Every height is spread over (0, 1)."""
        xs = plane_layout(sample_tree(four_level, rng))

        assert [len(x) for x in xs] == [1, 4, 5, 3, 2]
        assert all(np.all((x > 0) & (x < 1)) for x in xs)

    def test_children_follow_parent_order(self, four_level, rng):
        """Children of a lower-ranked parent sit further left."""
        tree = sample_tree(four_level, rng)
        xs = plane_layout(tree)

        for i in range(1, tree.height + 1):
            parent_x = xs[i - 1][tree.parents[i]]
            order = np.argsort(xs[i])
            assert np.all(np.diff(parent_x[order]) >= 0)

    def test_svg_written_deterministically(self, tmp_path):
        """A sine-profile tree renders to identical SVG bytes twice."""
        tree = sample_tree(from_profile(named_profile("sin"), 60), make_stream(7))

        a = render_svg(tree, tmp_path / "a.svg")
        b = render_svg(tree, tmp_path / "b.svg")

        assert a.read_text().lstrip().startswith("<?xml")
        assert a.read_bytes() == b.read_bytes()
