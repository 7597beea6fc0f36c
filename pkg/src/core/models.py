"""
Shared value types with validation.

This module defines the small immutable types exchanged between areas of the lab:
- VertexRef: (height, 1-based index) address of a tree vertex
- Violation / ValidationReport: invariant breaches found by schedule validation
- EmpiricalMeasure1D: finite atomic measure on [0, 1]
- AtomCloud: point cloud of (height/n, degree ratio) for large-degree vertices
- CurvePoint: one Monte Carlo estimate on a k-curve
"""

from typing import List, NamedTuple, Tuple

import numpy as np
from pydantic import BaseModel, Field, computed_field, model_validator


class VertexRef(NamedTuple):
    """
    Address of a tree vertex.

    Attributes:
        height: Height i >= 0 of the vertex
        index: 1-based position j within its height; the root is (0, 1)

    Examples:
        >>> VertexRef(0, 1)
        VertexRef(height=0, index=1)
    """

    height: int
    index: int


class Violation(BaseModel):
    """A single violated schedule invariant, located at a height."""

    model_config = {"frozen": True}

    height: int = Field(ge=0, description="Height at which the invariant fails")
    message: str = Field(min_length=1, description="Human-readable description")


class ValidationReport(BaseModel):
    """
    Outcome of validating a degree schedule.

    An empty violation list means the schedule is valid. Violations are data:
    validation never raises.

    Examples:
        >>> ValidationReport().is_valid
        True
    """

    model_config = {"frozen": True}

    violations: Tuple[Violation, ...] = Field(default=())

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def messages(self) -> List[str]:
        return [f"height {v.height}: {v.message}" for v in self.violations]


class EmpiricalMeasure1D(BaseModel):
    """
    Finite atomic measure on [0, 1].

    Used for the normalized profile measure (a probability measure) and for the
    merge measure (a finite measure whose mass need not be 1).

    Attributes:
        atoms: (location, weight) pairs with locations in [0, 1] and weights >= 0
        total_mass: Sum of the weights (derived)

    Examples:
        >>> m = EmpiricalMeasure1D(atoms=((0.0, 0.25), (0.5, 0.75)))
        >>> m.total_mass
        1.0
        >>> m.cdf([0.4]).tolist()
        [0.25]
    """

    model_config = {"frozen": True}

    atoms: Tuple[Tuple[float, float], ...] = Field(default=())

    @model_validator(mode="after")
    def validate_atoms(self) -> "EmpiricalMeasure1D":
        for location, weight in self.atoms:
            if not 0.0 <= location <= 1.0:
                raise ValueError(
                    f"Atom location {location} lies outside [0, 1]"
                )
            if weight < 0.0 or not np.isfinite(weight):
                raise ValueError(
                    f"Atom weight {weight} at {location} must be finite and non-negative"
                )
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def total_mass(self) -> float:
        return float(sum(weight for _, weight in self.atoms))

    def locations(self) -> np.ndarray:
        return np.array([t for t, _ in self.atoms], dtype=float)

    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=float)

    def cdf(self, grid) -> np.ndarray:
        """
        Cumulative mass function F(t) = mass of [0, t], evaluated on a grid.

        Args:
            grid: Points of [0, 1] at which to evaluate

        Returns:
            np.ndarray: F evaluated at every grid point (not normalized)
        """
        grid = np.asarray(grid, dtype=float)
        if not self.atoms:
            return np.zeros_like(grid)
        order = np.argsort(self.locations(), kind="stable")
        locations = self.locations()[order]
        cumulative = np.cumsum(self.weights()[order])
        positions = np.searchsorted(locations, grid, side="right")
        return np.where(positions > 0, cumulative[np.maximum(positions - 1, 0)], 0.0)


class AtomCloud(BaseModel):
    """
    Point cloud of large-degree vertices, one point per vertex.

    Attributes:
        points: (t, ratio) pairs with t = i/n and ratio = d_{i,j} / D_i in (0, 1]
    """

    model_config = {"frozen": True}

    points: Tuple[Tuple[float, float], ...] = Field(default=())

    @model_validator(mode="after")
    def validate_ratios(self) -> "AtomCloud":
        for t, ratio in self.points:
            if not 0.0 < ratio <= 1.0:
                raise ValueError(f"Cloud ratio {ratio} at t={t} must lie in (0, 1]")
        return self

    def __len__(self) -> int:
        return len(self.points)


class CurvePoint(BaseModel):
    """One point of a Monte Carlo curve indexed by k."""

    model_config = {"frozen": True}

    k: int = Field(ge=0)
    estimate: float = Field(ge=0.0, le=1.0)
    stderr: float = Field(ge=0.0)
