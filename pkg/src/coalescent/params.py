"""
Parameters (nu, rho, Theta) of the continuous growth-coalescent.

- nu: birth-time law on [0, 1], a piecewise-linear CDF given on a grid
- rho: small-merge intensity, a piecewise-constant density on grid cells
- theta: finite list of atoms (t, [theta_1 >= theta_2 >= ...]) driving
  multi-way merges

JSON layout:
    {"nu": {"cdf_grid": [[t, F], ...]},
     "rho": {"grid": [[t0, t1, density], ...]},
     "theta": [[t, [theta_1, ...]], ...]}
"""

import math
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from ..core.exceptions import OutputError, ParamsError


class NuSpec(BaseModel):
    """
    Birth law given by CDF values on a grid of [0, 1].

    Examples:
        >>> NuSpec.uniform().cdf([0.25]).tolist()
        [0.25]
    """

    model_config = {"frozen": True}

    cdf_grid: Tuple[Tuple[float, float], ...] = Field(min_length=2)

    @model_validator(mode="after")
    def validate_cdf(self) -> "NuSpec":
        t = np.array([p[0] for p in self.cdf_grid])
        F = np.array([p[1] for p in self.cdf_grid])
        if t[0] != 0.0 or t[-1] != 1.0:
            raise ValueError(f"nu grid must run from 0 to 1, got [{t[0]}, {t[-1]}]")
        if F[0] != 0.0 or not math.isclose(F[-1], 1.0, abs_tol=1e-12):
            raise ValueError(f"nu CDF must run from 0 to 1, got [{F[0]}, {F[-1]}]")
        if np.any(np.diff(t) <= 0):
            raise ValueError("nu grid points must be strictly increasing")
        if np.any(np.diff(F) <= 0):
            raise ValueError("nu CDF must be strictly increasing (support [0, 1], no atoms)")
        return self

    @classmethod
    def uniform(cls) -> "NuSpec":
        return cls(cdf_grid=((0.0, 0.0), (1.0, 1.0)))

    def _arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return (
            np.array([p[0] for p in self.cdf_grid]),
            np.array([p[1] for p in self.cdf_grid]),
        )

    def cdf(self, t) -> np.ndarray:
        grid, F = self._arrays()
        return np.interp(np.asarray(t, dtype=float), grid, F)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Inverse-CDF draws."""
        grid, F = self._arrays()
        return np.interp(rng.random(size), F, grid)


class RhoSpec(BaseModel):
    """Piecewise-constant density on disjoint cells [t0, t1] of [0, 1]."""

    model_config = {"frozen": True}

    grid: Tuple[Tuple[float, float, float], ...] = Field(default=())

    @model_validator(mode="after")
    def validate_cells(self) -> "RhoSpec":
        previous_end = 0.0
        for t0, t1, density in self.grid:
            if not 0.0 <= t0 < t1 <= 1.0:
                raise ValueError(f"rho cell [{t0}, {t1}] must satisfy 0 <= t0 < t1 <= 1")
            if t0 < previous_end:
                raise ValueError(f"rho cell [{t0}, {t1}] overlaps or is out of order")
            if density < 0.0 or not math.isfinite(density):
                raise ValueError(f"rho density {density} on [{t0}, {t1}] must be finite and non-negative")
            previous_end = t1
        return self

    @classmethod
    def constant(cls, density: float) -> "RhoSpec":
        return cls(grid=((0.0, 1.0, float(density)),)) if density > 0 else cls()

    def mass(self, a: float, b: float) -> float:
        """rho([a, b])."""
        total = 0.0
        for t0, t1, density in self.grid:
            overlap = min(b, t1) - max(a, t0)
            if overlap > 0:
                total += density * overlap
        return total

    def density_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        values = np.zeros_like(t)
        for t0, t1, density in self.grid:
            values = np.where((t >= t0) & (t < t1), density, values)
        return values


class LimitParams(BaseModel):
    """
    The triple (nu, rho, Theta).

    Each Theta atom is (t, weights) with t in (0, 1), weights positive and
    non-increasing with sum at most 1; theta_0(t) = 1 - sum of the weights.

    Examples:
        >>> p = LimitParams.uniform_constant_rate(2.0)
        >>> p.rho.mass(0.0, 0.5)
        1.0
    """

    model_config = {"frozen": True}

    nu: NuSpec
    rho: RhoSpec = Field(default_factory=RhoSpec)
    theta: Tuple[Tuple[float, Tuple[float, ...]], ...] = Field(default=())

    @model_validator(mode="after")
    def validate_theta(self) -> "LimitParams":
        times = [t for t, _ in self.theta]
        if len(set(times)) != len(times):
            raise ValueError(f"Theta atom times must be distinct, got {times}")
        for t, weights in self.theta:
            if not 0.0 < t < 1.0:
                raise ValueError(f"Theta atom time {t} must lie in (0, 1)")
            if not weights:
                raise ValueError(f"Theta atom at {t} has no weights")
            if any(w <= 0.0 for w in weights):
                raise ValueError(f"Theta weights at {t} must be positive, got {weights}")
            if any(a < b for a, b in zip(weights, weights[1:])):
                raise ValueError(f"Theta weights at {t} must be non-increasing, got {weights}")
            if sum(weights) > 1.0 + 1e-12:
                raise ValueError(f"Theta weights at {t} sum to {sum(weights)} > 1")
        if not math.isfinite(self.theta_square_sum()):
            raise ValueError("Sum of squared Theta weights must be finite")
        return self

    @classmethod
    def uniform_constant_rate(cls, rate: float) -> "LimitParams":
        """nu = Unif[0, 1], rho with constant density `rate`, no atoms."""
        return cls(nu=NuSpec.uniform(), rho=RhoSpec.constant(rate))

    def theta_square_sum(self) -> float:
        return float(sum(w * w for _, weights in self.theta for w in weights))

    @property
    def atom_times(self) -> np.ndarray:
        return np.array([t for t, _ in self.theta], dtype=float)


def load_params(path: Union[str, Path]) -> LimitParams:
    """
    Read a params JSON file.

    Raises:
        OutputError: If the file cannot be read
        ParamsError: If the content is not valid parameters
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise OutputError(f"Cannot read params file {path}: {e}") from e
    try:
        return LimitParams.model_validate_json(text)
    except ValidationError as e:
        raise ParamsError(f"Invalid params file {path}: {e}") from e


def save_params(params: LimitParams, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.write_text(params.model_dump_json() + "\n")
    except OSError as e:
        raise OutputError(f"Cannot write params file {path}: {e}") from e
    return path
