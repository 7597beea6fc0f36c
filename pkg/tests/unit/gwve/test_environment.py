"""
Unit tests for branching environments.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.exceptions import EnvironmentSpecError, OutputError
from src.gwve.environment import (
    Environment,
    environment_from_spec,
    load_environment,
    save_environment,
    with_generation,
)


class TestEnvironment:
    """Offspring laws and the time change."""

    def test_pmf_arrays(self):
        """Generation laws come back as value and probability arrays."""
        values, probs = Environment.two_point(4).pmf(2)

        assert values.tolist() == [0, 2]
        assert probs.tolist() == [0.5, 0.5]

    def test_pmf_index_range(self):
        """Generations run from 1 to n."""
        with pytest.raises(IndexError):
            Environment.two_point(4).pmf(0)

    def test_law_count_must_match_n(self):
        """One law per generation."""
        with pytest.raises(ValidationError):
            Environment(n=2, ell=1.0, pmfs=(((1, 1.0),),))

    @pytest.mark.parametrize(
        "law",
        [
            ((0, 0.5), (2, 0.4)),
            ((1, 0.5), (1, 0.5)),
            ((-1, 0.5), (2, 0.5)),
            ((0, -0.5), (2, 1.5)),
            (),
        ],
    )
    def test_invalid_laws(self, law):
        """Probabilities sum to 1 over distinct non-negative values."""
        with pytest.raises(ValidationError):
            Environment(n=1, ell=1.0, pmfs=(law,))

    def test_identity_generation_grid(self):
        """Without gamma the generation times are i / n."""
        env = Environment.two_point(4)

        assert env.generation_times().tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert env.generation_at([0.0, 0.2499, 0.5, 1.0]).tolist() == [0, 0, 2, 4]

    def test_time_change(self):
        """gamma and its inverse interpolate the grid."""
        env = Environment(
            n=4, ell=4.0, gamma=((0.0, 0.0), (0.5, 0.25), (1.0, 1.0)), pmfs=(((1, 1.0),),) * 4
        )

        assert float(env.gamma_at(0.5)) == pytest.approx(0.25)
        assert float(env.gamma_inverse(0.25)) == pytest.approx(0.5)
        assert env.generation_at(0.5) == 1

    def test_gamma_endpoints(self):
        """gamma maps 0 to 0 and 1 to 1."""
        with pytest.raises(ValidationError):
            Environment(n=1, ell=1.0, gamma=((0.0, 0.1), (1.0, 1.0)), pmfs=(((1, 1.0),),))

    def test_default_scale(self):
        """two_point uses ell = n, deterministic ell = 1."""
        assert Environment.two_point(50).ell == 50.0
        assert Environment.deterministic(5, 2).ell == 1.0


class TestCriticalGeometric:
    """The truncated geometric family."""

    def test_truncation_is_recorded(self):
        """The cut tail is kept as truncation mass and the law renormalized."""
        env = Environment.critical_geometric(3, quantile=0.99)
        values, probs = env.pmf(1)

        assert env.truncation_mass > 0.0
        assert env.truncation_mass < 0.01
        assert probs.sum() == pytest.approx(1.0)
        assert values[0] == 0

    def test_mean_close_to_one(self):
        """The untruncated law is critical."""
        values, probs = Environment.critical_geometric(1).pmf(1)

        assert float(values @ probs) == pytest.approx(1.0, abs=1e-6)

    def test_quantile_range(self):
        """quantile lies in (0, 1)."""
        with pytest.raises(ValueError):
            Environment.critical_geometric(3, quantile=1.0)


class TestSpecs:
    """JSON forms of environments."""

    def test_named_family(self):
        """A family name builds the family."""
        env = environment_from_spec({"family": "two_point", "n": 10})

        assert env.n == 10
        assert env.ell == 10.0

    def test_unknown_family(self):
        """Unknown families are spec errors."""
        with pytest.raises(EnvironmentSpecError, match="Unknown environment family"):
            environment_from_spec({"family": "poisson", "n": 10})

    def test_explicit_invalid(self):
        """Invalid explicit laws are spec errors."""
        with pytest.raises(EnvironmentSpecError):
            environment_from_spec({"n": 1, "ell": 1.0, "pmfs": [[[1, 0.3]]]})

    def test_with_generation(self):
        """One generation is replaced, the rest kept."""
        env = with_generation(Environment.deterministic(3, 1), 2, ((0, 1.0),))

        assert env.pmf(2)[0].tolist() == [0]
        assert env.pmf(1)[0].tolist() == [1]

    def test_save_and_load(self, tmp_path):
        """A saved environment loads back unchanged."""
        env = Environment.critical_geometric(4, ell=2.5, quantile=0.9)

        loaded = load_environment(save_environment(env, tmp_path / "env.json"))

        assert loaded == env

    def test_load_missing(self, tmp_path):
        """Missing files are I/O errors."""
        with pytest.raises(OutputError):
            load_environment(tmp_path / "absent.json")

    def test_load_not_json(self, tmp_path):
        """Malformed files are spec errors."""
        path = tmp_path / "env.json"
        path.write_text("n: 3")

        with pytest.raises(EnvironmentSpecError):
            load_environment(path)

    def test_generation_at_is_integer(self):
        """Generation indices are integer arrays."""
        assert Environment.two_point(3).generation_at(np.array([0.4])).dtype == np.int64
