"""
Unit tests for the coalescent parameters (nu, rho, Theta).
"""

import numpy as np
import pytest
from pydantic import ValidationError

from src.coalescent.params import LimitParams, NuSpec, RhoSpec, load_params, save_params
from src.core.exceptions import OutputError, ParamsError


class TestNuSpec:
    """Birth law on [0, 1]."""

    def test_uniform_cdf(self):
        """The uniform CDF is the identity."""
        assert NuSpec.uniform().cdf([0.0, 0.3, 1.0]).tolist() == pytest.approx([0.0, 0.3, 1.0])

    def test_piecewise_cdf(self):
        """Linear interpolation between grid points."""
        nu = NuSpec(cdf_grid=((0.0, 0.0), (0.5, 0.8), (1.0, 1.0)))

        assert nu.cdf([0.25, 0.75]).tolist() == pytest.approx([0.4, 0.9])

    def test_samples_in_unit_interval(self, rng):
        """Inverse-CDF draws stay in [0, 1]."""
        draws = NuSpec(cdf_grid=((0.0, 0.0), (0.5, 0.8), (1.0, 1.0))).sample(rng, 1000)

        assert draws.min() >= 0.0
        assert draws.max() <= 1.0
        assert np.mean(draws < 0.5) == pytest.approx(0.8, abs=0.05)

    def test_grid_must_cover_unit_interval(self):
        """Grids run from 0 to 1."""
        with pytest.raises(ValidationError):
            NuSpec(cdf_grid=((0.1, 0.0), (1.0, 1.0)))

    def test_cdf_must_reach_one(self):
        """No mass is missing."""
        with pytest.raises(ValidationError):
            NuSpec(cdf_grid=((0.0, 0.0), (1.0, 0.9)))

    def test_flat_cdf_rejected(self):
        """Support is all of [0, 1]."""
        with pytest.raises(ValidationError):
            NuSpec(cdf_grid=((0.0, 0.0), (0.5, 0.5), (0.7, 0.5), (1.0, 1.0)))


class TestRhoSpec:
    """Small-merge intensity."""

    def test_constant_mass(self):
        """Density 2 gives mass 1 on [0, 1/2]."""
        assert RhoSpec.constant(2.0).mass(0.0, 0.5) == pytest.approx(1.0)

    def test_zero_constant_is_empty(self):
        """No cells for a zero density."""
        assert RhoSpec.constant(0.0).grid == ()

    def test_mass_over_cells(self):
        """Mass adds over the cells a window overlaps."""
        rho = RhoSpec(grid=((0.0, 0.5, 1.0), (0.5, 1.0, 3.0)))

        assert rho.mass(0.25, 0.75) == pytest.approx(0.25 + 0.75)

    def test_density_at(self):
        """Points outside every cell have density 0."""
        rho = RhoSpec(grid=((0.2, 0.4, 5.0),))

        assert rho.density_at([0.1, 0.3, 0.5]).tolist() == [0.0, 5.0, 0.0]

    def test_overlapping_cells_rejected(self):
        """Cells are disjoint and ordered."""
        with pytest.raises(ValidationError):
            RhoSpec(grid=((0.0, 0.6, 1.0), (0.5, 1.0, 1.0)))

    def test_negative_density_rejected(self):
        """Densities are non-negative."""
        with pytest.raises(ValidationError):
            RhoSpec(grid=((0.0, 1.0, -1.0),))


class TestLimitParams:
    """The triple and its Theta atoms."""

    def test_uniform_constant_rate(self):
        """Uniform nu, constant rho, no atoms."""
        params = LimitParams.uniform_constant_rate(2.0)

        assert params.theta == ()
        assert params.rho.mass(0.0, 1.0) == pytest.approx(2.0)
        assert params.theta_square_sum() == 0.0

    def test_theta_square_sum(self):
        """Sum of squared weights over every atom."""
        params = LimitParams(nu=NuSpec.uniform(), theta=((0.5, (0.5, 0.25)), (0.2, (0.6,))))

        assert params.theta_square_sum() == pytest.approx(0.25 + 0.0625 + 0.36)
        assert params.atom_times.tolist() == [0.5, 0.2]

    @pytest.mark.parametrize(
        "theta",
        [
            ((1.0, (0.5,)),),
            ((0.5, ()),),
            ((0.5, (0.2, 0.4)),),
            ((0.5, (0.6, 0.5)),),
            ((0.5, (0.5, -0.1)),),
            ((0.5, (0.5,)), (0.5, (0.3,))),
        ],
    )
    def test_invalid_theta(self, theta):
        """Times in (0, 1), distinct; weights positive, non-increasing, sum <= 1."""
        with pytest.raises(ValidationError):
            LimitParams(nu=NuSpec.uniform(), theta=theta)


class TestParamsFiles:
    """JSON persistence."""

    def test_save_and_load(self, tmp_path):
        """A saved file loads back to equal parameters."""
        params = LimitParams(
            nu=NuSpec(cdf_grid=((0.0, 0.0), (0.5, 0.8), (1.0, 1.0))),
            rho=RhoSpec(grid=((0.0, 0.5, 1.5),)),
            theta=((0.4, (0.5, 0.25)),),
        )

        loaded = load_params(save_params(params, tmp_path / "params.json"))

        assert loaded == params

    def test_missing_file(self, tmp_path):
        """Unreadable files are I/O errors."""
        with pytest.raises(OutputError):
            load_params(tmp_path / "absent.json")

    def test_invalid_content(self, tmp_path):
        """Invalid content is a params error."""
        path = tmp_path / "params.json"
        path.write_text('{"nu": {"cdf_grid": [[0.0, 0.0]]}}')

        with pytest.raises(ParamsError):
            load_params(path)

    def test_unwritable_target(self, tmp_path):
        """Writing into a missing directory fails as I/O."""
        with pytest.raises(OutputError):
            save_params(LimitParams.uniform_constant_rate(1.0), tmp_path / "missing" / "params.json")
