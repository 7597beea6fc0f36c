"""
Unit tests for DegreeSchedule and schedule validation.

Tests cover:
- Derived quantities (D, h, norm, total vertex count)
- Dense and sparse construction
- Every invariant reported by validate
"""

import pytest
from pydantic import ValidationError

from src.schedule.schedule import DegreeSchedule, validate


class TestDerivedQuantities:
    """Row sums, height and norms."""

    def test_four_level_profile(self, four_level):
        """D = (4, 5, 3, 2, 0) with height 4."""
        assert four_level.D.tolist() == [4, 5, 3, 2, 0]
        assert four_level.h == 4
        assert four_level.norm == 5
        assert four_level.total_vertices == 15

    def test_generation_sizes(self, four_level):
        """Generation i holds D_{i-1} vertices, the root generation one."""
        assert [four_level.generation_size(i) for i in range(5)] == [1, 4, 5, 3, 2]

    def test_dense_degrees_and_lookup(self, four_level):
        """Row 1 is (3, 1, 1) in slot order; slots past the positives have degree 0."""
        assert four_level.degrees(1).tolist() == [3, 1, 1]
        assert four_level.degree_of(1, 1) == 3
        assert four_level.degree_of(1, 3) == 1
        assert four_level.degree_of(1, 4) == 0

    def test_from_dense_drops_zeros(self):
        """Zero degrees are implicit."""
        schedule = DegreeSchedule.from_dense(2, [[2], [1, 1, 0]])

        assert schedule.rows == (((2, 1),), ((1, 2),))

    def test_single_vertex_tree(self):
        """A schedule with no rows is the single root."""
        schedule = DegreeSchedule(n=1, rows=())

        assert schedule.h == 0
        assert schedule.total_vertices == 1

    def test_height_stops_at_first_empty_row(self):
        """Rows after the first empty row do not count."""
        schedule = DegreeSchedule(n=3, rows=(((2, 1),), (), ((1, 1),)))

        assert schedule.h == 1
        assert schedule.D.tolist() == [2, 0]

    def test_negative_entry_rejected(self):
        """Storage must hold non-negative integers."""
        with pytest.raises(ValidationError, match="negative entry"):
            DegreeSchedule(n=1, rows=(((-1, 1),),))

    def test_schedule_is_frozen(self, four_level):
        """Schedules are immutable."""
        with pytest.raises(ValidationError):
            four_level.n = 5


class TestValidate:
    """validate lists violations as data."""

    def test_named_schedules_are_valid(self, four_level, path10, kingman_small, two_paths):
        """Every family builder produces a valid schedule."""
        for schedule in (four_level, path10, kingman_small, two_paths):
            assert validate(schedule).is_valid

    def test_coherence_violation(self):
        """Three positive degrees at height 1 with only two vertices there."""
        schedule = DegreeSchedule.from_dense(2, [[2], [1, 1, 1]])

        report = validate(schedule)

        assert not report.is_valid
        assert report.violations[0].height == 1
        assert "coherence" in report.messages()[0]

    def test_increasing_row(self):
        """Rows must be non-increasing."""
        schedule = DegreeSchedule.from_dense(2, [[3], [1, 2]])

        report = validate(schedule)

        assert any("non-increasing" in message for message in report.messages())

    def test_root_with_two_children_slots(self):
        """Only one vertex lives at height 0."""
        schedule = DegreeSchedule(n=1, rows=(((1, 2),),))

        report = validate(schedule)

        assert any(v.height == 0 and "root" in v.message for v in report.violations)

    def test_zero_count_and_explicit_zero_degree(self):
        """Stored zero counts and zero degrees are both reported."""
        schedule = DegreeSchedule(n=2, rows=(((2, 1), (1, 0)), ((1, 1), (0, 1))))

        messages = validate(schedule).messages()

        assert any("count 0" in m for m in messages)
        assert any("zero degree" in m for m in messages)
