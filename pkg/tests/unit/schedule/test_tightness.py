"""
Unit tests for tau, its windows and the schedule hypothesis checks.
"""

import math

import pytest

from src.schedule.builders import kingman_schedule, path_schedule
from src.schedule.tightness import (
    check_height_ratio,
    check_split_atoms,
    check_tightness_ghp,
    tau,
    tau_window,
)


class TestTau:
    """tau_i(k) values."""

    def test_four_level_row_one(self, four_level):
        """Row (3, 1, 1) of D_1 = 5 gives 0.3 at k = 1 and 0.6 at k = 4."""
        assert tau(four_level, 1, 1) == pytest.approx(0.3, abs=1e-15)
        assert tau(four_level, 1, 4) == pytest.approx(0.6, abs=1e-15)

    def test_saturates_in_k(self, four_level):
        """Once k (d - 1)/(D - 1) >= 1 for every vertex, tau stops growing."""
        assert tau(four_level, 1, 100) == tau(four_level, 1, 4)

    def test_unary_rows_are_infinite(self, path10):
        """D_i in {0, 1} gives +inf."""
        assert tau(path10, 3, 5) == math.inf
        assert tau(path10, 10, 5) == math.inf

    def test_invalid_arguments(self, four_level):
        """Negative heights and non-positive k are rejected."""
        with pytest.raises(ValueError):
            tau(four_level, -1, 1)
        with pytest.raises(ValueError):
            tau(four_level, 1, 0)

    def test_kingman_full_window(self, kingman_desk):
        """420 rows of 1/210 sum to 2."""
        assert tau_window(kingman_desk, 1, 420, 1) == pytest.approx(2.0, abs=1e-12)

    def test_window_order(self, four_level):
        """The window start must not exceed its end."""
        with pytest.raises(ValueError):
            tau_window(four_level, 3, 1, 1)


class TestTightnessGHP:
    """The windowed tau >= log k criterion."""

    def test_kingman_passes_for_large_k(self, kingman_desk):
        """Windows of length n / (log log 50)^2 collect about 21 >= log 50."""
        report = check_tightness_ghp(kingman_desk, 0.25, 0.75, [50])

        assert report.passed
        assert report.evaluated_rows > 0
        assert report.truncated_rows > 0
        assert report.worst_margin > 0

    def test_wide_kingman_fails(self):
        """With 1000 lines per height, merges are too rare."""
        report = check_tightness_ghp(kingman_schedule(100, 1000), 0.25, 0.75, [50])

        assert not report.passed
        assert report.worst_k == 50
        assert report.worst_margin < 0

    def test_path_passes_vacuously(self, path10):
        """tau = +inf everywhere; k > ||D|| is evaluated with a warning."""
        report = check_tightness_ghp(path10, 0.25, 0.75, [1000])

        assert report.passed
        assert not report.inconclusive
        assert report.evaluated_rows == 5
        assert report.loglog_norm_over_n is None

    def test_all_windows_truncated_is_inconclusive(self, path10):
        """For k = 3 every window is longer than the tree, so nothing is checked."""
        report = check_tightness_ghp(path10, 0.25, 0.75, [3])

        assert report.evaluated_rows == 0
        assert report.truncated_rows == 5
        assert report.inconclusive
        assert not report.passed

    def test_small_k_rejected(self, kingman_desk):
        """k below 3 makes log log k undefined or negative."""
        with pytest.raises(ValueError, match="at least 3"):
            check_tightness_ghp(kingman_desk, 0.25, 0.75, [2])

    def test_alpha_beta_order(self, kingman_desk):
        """Need 0 < alpha < beta < 1."""
        with pytest.raises(ValueError):
            check_tightness_ghp(kingman_desk, 0.75, 0.25, [3])

    def test_loglog_norm(self, kingman_desk):
        """log log ||D|| / n for ||D|| = 21."""
        report = check_tightness_ghp(kingman_desk, 0.25, 0.75, [50])

        assert report.loglog_norm_over_n == pytest.approx(math.log(math.log(21)) / 420)

    def test_per_k_entries(self, kingman_desk):
        """One margin summary per k."""
        report = check_tightness_ghp(kingman_desk, 0.25, 0.75, [10, 50])

        assert [m.k for m in report.per_k] == [10, 50]


class TestShapeChecks:
    """Height ratio and giant separation."""

    def test_height_ratio(self, kingman_desk, path10):
        """h / n."""
        assert check_height_ratio(kingman_desk) == pytest.approx(421 / 420)
        assert check_height_ratio(path10) == 1.0

    def test_split_atoms(self):
        """Giants at 30 and 60 out of n = 100 are 0.3 apart."""
        schedule = kingman_schedule(100, 30, giant_heights=(30, 60))

        report = check_split_atoms(schedule, 0.1)

        assert report.marked_heights == (30, 60)
        assert report.min_gap == pytest.approx(0.3)

    def test_single_giant_gap_is_infinite(self):
        """At most one marked height leaves the gap at +inf."""
        report = check_split_atoms(kingman_schedule(100, 30, giant_heights=(50,)), 0.1)

        assert report.marked_heights == (50,)
        assert report.min_gap == math.inf

    def test_giants_near_the_ends_are_ignored(self):
        """Only heights in (eps n, (1 - eps) n) count."""
        report = check_split_atoms(kingman_schedule(100, 30, giant_heights=(5, 95)), 0.1)

        assert report.marked_heights == ()

    def test_eps_range(self, kingman_small):
        """eps must lie in (0, 1/2)."""
        with pytest.raises(ValueError):
            check_split_atoms(kingman_small, 0.5)


def test_path_schedule_height_ratio_is_exact():
    """The path has h = n."""
    assert check_height_ratio(path_schedule(7)) == 1.0
