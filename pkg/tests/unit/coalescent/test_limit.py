"""
Unit tests for the continuous growth-coalescent.

Tests cover:
- Replays of hand-built randomness (small merges, atoms, ties)
- Restriction of a draw to its first labels
- Distances, leaf-tightness and waiting times of a trace
- The closed-form pair distance and the Tight_GP check
"""

import json

import numpy as np
import pytest

from src.coalescent.limit import (
    CoalescentRandomness,
    check_tight_gp,
    continuous_leaf_tightness_curve,
    draw_randomness,
    first_merge_waiting_time,
    leaf_tightness_stat_continuous,
    limit_distance_matrix,
    limit_trace_to_jsonl,
    replay,
    restrict,
    sample_coalescent,
    uniform_constant_rate_pair_distance,
)
from src.coalescent.params import LimitParams, NuSpec, RhoSpec
from src.core.streams import make_stream


def randomness(births, points=(), atoms=(), labels=None):
    """Hand-built randomness; points are (time, q, r) with 0-based labels."""
    births = np.asarray(births, dtype=float)
    return CoalescentRandomness(
        births=births,
        point_times=np.array([t for t, _, _ in points], dtype=float),
        point_q=np.array([q for _, q, _ in points], dtype=np.int64),
        point_r=np.array([r for _, _, r in points], dtype=np.int64),
        atom_times=np.asarray(atoms, dtype=float),
        atom_labels=np.asarray(labels if labels is not None else np.zeros((0, len(births))), dtype=np.int64),
    )


@pytest.fixture
def small_merge_trace():
    """Births 0.9, 0.8, 0.5; labels 1 and 2 merge at 0.7."""
    return replay(randomness([0.9, 0.8, 0.5], points=[(0.7, 0, 1)]))


class TestReplay:
    """The coalescent on given randomness."""

    def test_small_merge_then_final(self, small_merge_trace):
        """One small merge, then everything joins label 1 at time 0."""
        events = small_merge_trace.events

        assert [e.kind for e in events] == ["small", "final"]
        assert events[0].time == pytest.approx(0.7)
        assert events[0].blocks == ((1, 2),)
        assert events[1].blocks == ((1, 2, 3),)

    def test_merge_times(self, small_merge_trace):
        """c(1, 2) = 0.7; label 3 only meets the others at 0."""
        c = small_merge_trace.merge_times

        assert c[0, 1] == pytest.approx(0.7)
        assert c[0, 2] == 0.0
        assert c[1, 2] == 0.0
        assert np.diag(c).tolist() == pytest.approx([0.9, 0.8, 0.5])

    def test_distance_matrix(self, small_merge_trace):
        """d(q, r) = H_q + H_r - 2 c(q, r)."""
        d = limit_distance_matrix(small_merge_trace)

        assert d[0, 1] == pytest.approx(0.3)
        assert d[0, 2] == pytest.approx(1.4)
        assert d[1, 2] == pytest.approx(1.3)
        assert np.diag(d).tolist() == [0.0, 0.0, 0.0]

    def test_point_above_a_birth_is_ignored(self):
        """A pair point above the lower birth never acts."""
        trace = replay(randomness([0.9, 0.6], points=[(0.7, 0, 1)]))

        assert [e.kind for e in trace.events] == ["final"]

    def test_only_the_highest_point_of_a_pair_acts(self):
        """The second point of the same pair changes nothing."""
        trace = replay(randomness([0.9, 0.8], points=[(0.4, 0, 1), (0.7, 0, 1)]))

        assert [e.time for e in trace.events] == pytest.approx([0.7])
        assert trace.merge_times[0, 1] == pytest.approx(0.7)

    def test_points_of_emptied_labels_are_skipped(self):
        """Label 2 is empty after joining label 1, so its pair with 3 is idle."""
        trace = replay(randomness([0.9, 0.8, 0.7], points=[(0.6, 0, 1), (0.5, 1, 2)]))

        assert [e.kind for e in trace.events] == ["small", "final"]
        assert trace.merge_times[1, 2] == 0.0

    def test_atom_merges_groups(self):
        """Labels drawing 1 merge, labels drawing 2 merge, separately."""
        trace = replay(randomness([0.9, 0.8, 0.7, 0.6], atoms=[0.5], labels=[[1, 2, 1, 2]]))

        assert trace.events[0].kind == "large"
        assert trace.events[0].blocks == ((1, 3), (2, 4))
        assert trace.merge_times[0, 2] == pytest.approx(0.5)
        assert trace.merge_times[1, 3] == pytest.approx(0.5)
        assert trace.merge_times[0, 1] == 0.0

    def test_label_born_at_an_atom_does_not_take_part(self):
        """Atoms act before births at the same time."""
        trace = replay(randomness([0.9, 0.5], atoms=[0.5], labels=[[1, 1]]))

        assert [e.kind for e in trace.events] == ["final"]

    def test_zero_labels_do_not_merge(self):
        """Drawing 0 means staying out of the atom."""
        trace = replay(randomness([0.9, 0.8], atoms=[0.5], labels=[[0, 0]]))

        assert [e.kind for e in trace.events] == ["final"]

    def test_single_label(self):
        """One label has no events."""
        trace = replay(randomness([0.4]))

        assert trace.events == ()


class TestDrawRandomness:
    """Labelled randomness."""

    def test_k_must_be_positive(self, uniform_rate2, rng):
        """k = 0 is rejected."""
        with pytest.raises(ValueError):
            draw_randomness(uniform_rate2, 0, rng)

    def test_fixed_births(self, uniform_rate2, rng):
        """Given births replace the draws from nu."""
        drawn = draw_randomness(uniform_rate2, 3, rng, births=[0.2, 0.4, 0.6])

        assert drawn.births.tolist() == [0.2, 0.4, 0.6]

    def test_fixed_births_checked(self, uniform_rate2, rng):
        """Births must be k values in [0, 1]."""
        with pytest.raises(ValueError):
            draw_randomness(uniform_rate2, 3, rng, births=[0.2, 0.4])
        with pytest.raises(ValueError):
            draw_randomness(uniform_rate2, 2, rng, births=[0.2, 1.4])

    def test_points_belong_to_pairs(self, uniform_rate2, rng):
        """Every point has q < r < k and a time in [0, 1]."""
        drawn = draw_randomness(uniform_rate2, 6, rng)

        assert np.all(drawn.point_q < drawn.point_r)
        assert np.all(drawn.point_r < 6)
        assert np.all((drawn.point_times >= 0) & (drawn.point_times <= 1))

    def test_atom_labels_shape(self, rng):
        """One label row per atom."""
        params = LimitParams(nu=NuSpec.uniform(), theta=((0.5, (0.5, 0.25)), (0.3, (0.6,))))

        drawn = draw_randomness(params, 5, rng)

        assert drawn.atom_labels.shape == (2, 5)
        assert drawn.atom_labels.max() <= 2


class TestRestrict:
    """Replaying the first labels of a larger draw."""

    def test_restriction_matches_the_corner(self, uniform_rate2):
        """The trace of labels 1..3 is the 3x3 corner of the trace of 1..8."""
        drawn = draw_randomness(uniform_rate2, 8, make_stream(11))

        full = replay(drawn)
        small = replay(restrict(drawn, 3))

        assert np.allclose(small.merge_times, full.merge_times[:3, :3])

    def test_restriction_with_atoms(self):
        """Atoms keep the corner consistent too."""
        params = LimitParams(nu=NuSpec.uniform(), rho=RhoSpec.constant(1.0), theta=((0.5, (0.5,)),))
        drawn = draw_randomness(params, 7, make_stream(3))

        full = replay(drawn)
        small = replay(restrict(drawn, 4))

        assert np.allclose(small.merge_times, full.merge_times[:4, :4])

    def test_restrict_bounds(self, uniform_rate2, rng):
        """k must lie in [1, k_drawn]."""
        drawn = draw_randomness(uniform_rate2, 3, rng)

        with pytest.raises(ValueError):
            restrict(drawn, 4)
        with pytest.raises(ValueError):
            restrict(drawn, 0)


class TestTraceStatistics:
    """Leaf tightness, waiting times and exports."""

    def test_leaf_tightness_above_the_merge(self, small_merge_trace):
        """At x = 0.75 labels 1 and 2 are born above x and still apart."""
        assert leaf_tightness_stat_continuous(small_merge_trace, 0.75) == 2

    def test_leaf_tightness_below_the_merge(self, small_merge_trace):
        """At x = 0.6 labels 1 and 2 have met above x."""
        assert leaf_tightness_stat_continuous(small_merge_trace, 0.6) == 0

    def test_leaf_tightness_x_range(self, small_merge_trace):
        """x lies in [0, 1]."""
        with pytest.raises(ValueError):
            leaf_tightness_stat_continuous(small_merge_trace, 1.5)

    def test_first_merge_waiting_time(self, small_merge_trace):
        """Lowest birth 0.5, next merge at 0."""
        assert first_merge_waiting_time(small_merge_trace) == pytest.approx(0.5)

    def test_first_merge_waiting_time_with_atom(self):
        """Lowest birth 0.6, atom merge at 0.5."""
        trace = replay(randomness([0.9, 0.8, 0.7, 0.6], atoms=[0.5], labels=[[1, 2, 1, 2]]))

        assert first_merge_waiting_time(trace) == pytest.approx(0.1)

    def test_jsonl(self, small_merge_trace):
        """One object per event."""
        lines = limit_trace_to_jsonl(small_merge_trace).splitlines()

        assert len(lines) == 2
        assert json.loads(lines[0])["kind"] == "small"
        assert json.loads(lines[1])["blocks"] == [[1, 2, 3]]

    def test_curve(self, uniform_rate2, rng):
        """One point per k with an estimate in [0, 1]."""
        curve = continuous_leaf_tightness_curve(uniform_rate2, rng, [2, 5], x=0.5, replicates=20)

        assert [point.k for point in curve] == [2, 5]
        assert all(0.0 <= point.estimate <= 1.0 for point in curve)

    def test_sample_coalescent_size(self, uniform_rate2, rng):
        """A run over k labels has a k x k merge-time matrix."""
        trace = sample_coalescent(uniform_rate2, 5, rng)

        assert trace.merge_times.shape == (5, 5)
        assert np.allclose(trace.merge_times, trace.merge_times.T)


class TestClosedForms:
    """Pair distance and Tight_GP."""

    def test_pair_distance_rate_two(self):
        """E[d(V_1, V_2)] for rate 2."""
        assert uniform_constant_rate_pair_distance(2.0) == pytest.approx(0.76567, abs=1e-4)

    def test_pair_distance_rate_zero(self):
        """Without merges both lines run to the root."""
        assert uniform_constant_rate_pair_distance(0.0) == 1.0

    def test_pair_distance_decreases_with_rate(self):
        """Faster merging shortens distances."""
        values = [uniform_constant_rate_pair_distance(rate) for rate in (0.5, 2.0, 8.0)]

        assert values == sorted(values, reverse=True)

    def test_pair_distance_negative_rate(self):
        """Rates are non-negative."""
        with pytest.raises(ValueError):
            uniform_constant_rate_pair_distance(-1.0)

    def test_tight_gp_passes_with_constant_rate(self, uniform_rate2):
        """Constant density charges every window."""
        assert check_tight_gp(uniform_rate2, [(0.1, 0.2), (0.8, 0.9)]).passed

    def test_tight_gp_reports_empty_windows(self):
        """rho vanishing on [0, 1/2] fails the windows there."""
        params = LimitParams(nu=NuSpec.uniform(), rho=RhoSpec(grid=((0.5, 1.0, 1.0),)))

        report = check_tight_gp(params, [(0.1, 0.3), (0.6, 0.7)])

        assert not report.passed
        assert report.failing_windows == ((0.1, 0.3),)
