"""
Branching environments: one finite-support offspring law per generation.

Generation i (1 <= i <= n) draws the offspring counts xi_{i,n}(j) of the
Z_{i-1} individuals of generation i - 1 from pmfs[i - 1]. The scale ell turns
counts into the rescaled path X_n(t) = Z_{floor(n gamma(t))} / ell; gamma is
an increasing bijection of [0, 1] given on a grid (identity when omitted).

JSON layout, either explicit
    {"n": 3, "ell": 3.0, "gamma": [[s, g], ...], "pmfs": [[[j, p], ...], ...]}
or named
    {"family": "two_point", "n": 200, "ell": 200.0}
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from ..core.exceptions import EnvironmentSpecError, OutputError

Pmf = Tuple[Tuple[int, float], ...]

# floor(n * gamma(t)) must not lose a generation to rounding at t = i / n
_FLOOR_SLACK = 1e-9


class Environment(BaseModel):
    """
    Offspring laws of a Galton-Watson process in varying environment.

    Attributes:
        n: Number of generations
        ell: Space scale
        gamma: Optional time change as (s, gamma(s)) grid points
        pmfs: pmfs[i - 1] is the law of xi_{i,n} as (value, probability) pairs
        truncation_mass: Probability removed when a heavy-tailed law was cut

    Examples:
        >>> env = Environment.deterministic(3, 2)
        >>> env.pmf(1)
        (array([2]), array([1.]))
    """

    model_config = {"frozen": True}

    n: int = Field(gt=0)
    ell: float = Field(gt=0.0)
    gamma: Optional[Tuple[Tuple[float, float], ...]] = None
    pmfs: Tuple[Pmf, ...]
    truncation_mass: float = Field(default=0.0, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def validate_laws(self) -> "Environment":
        if len(self.pmfs) != self.n:
            raise ValueError(f"Expected {self.n} offspring laws, got {len(self.pmfs)}")
        for i, pmf in enumerate(self.pmfs, start=1):
            if not pmf:
                raise ValueError(f"Generation {i} has an empty offspring law")
            values = [v for v, _ in pmf]
            if any(v < 0 for v in values):
                raise ValueError(f"Generation {i} has a negative offspring value")
            if len(set(values)) != len(values):
                raise ValueError(f"Generation {i} repeats an offspring value")
            if any(p < 0.0 for _, p in pmf):
                raise ValueError(f"Generation {i} has a negative probability")
            total = sum(p for _, p in pmf)
            if not math.isclose(total, 1.0, abs_tol=1e-9):
                raise ValueError(f"Generation {i} probabilities sum to {total}, not 1")
        if self.gamma is not None:
            s = np.array([p[0] for p in self.gamma])
            g = np.array([p[1] for p in self.gamma])
            if len(s) < 2 or s[0] != 0.0 or s[-1] != 1.0 or g[0] != 0.0 or g[-1] != 1.0:
                raise ValueError("gamma must map 0 to 0 and 1 to 1")
            if np.any(np.diff(s) <= 0) or np.any(np.diff(g) <= 0):
                raise ValueError("gamma must be strictly increasing")
        return self

    def pmf(self, i: int) -> Tuple[np.ndarray, np.ndarray]:
        """(values, probabilities) of generation i, 1 <= i <= n."""
        if not 1 <= i <= self.n:
            raise IndexError(f"generation {i} outside [1, {self.n}]")
        law = self.pmfs[i - 1]
        return (
            np.array([v for v, _ in law], dtype=np.int64),
            np.array([p for _, p in law], dtype=float),
        )

    def gamma_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.gamma is None:
            return t
        return np.interp(t, [p[0] for p in self.gamma], [p[1] for p in self.gamma])

    def gamma_inverse(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.gamma is None:
            return u
        return np.interp(u, [p[1] for p in self.gamma], [p[0] for p in self.gamma])

    def generation_at(self, t) -> np.ndarray:
        """floor(n gamma(t)), clipped to [0, n]."""
        index = np.floor(self.n * self.gamma_at(t) + _FLOOR_SLACK).astype(np.int64)
        return np.clip(index, 0, self.n)

    def generation_times(self) -> np.ndarray:
        """t_i = gamma^{-1}(i / n) for i = 0..n; X_n is constant on [t_i, t_{i+1})."""
        return self.gamma_inverse(np.arange(self.n + 1) / self.n)

    # ------------------------------------------------------------------
    # Named families
    # ------------------------------------------------------------------

    @classmethod
    def deterministic(cls, n: int, value: int, ell: Optional[float] = None) -> "Environment":
        """Every individual has exactly `value` children."""
        return cls(n=n, ell=float(ell if ell is not None else 1.0), pmfs=(((value, 1.0),),) * n)

    @classmethod
    def two_point(cls, n: int, ell: Optional[float] = None) -> "Environment":
        """Critical law {0: 1/2, 2: 1/2} at every generation."""
        return cls(n=n, ell=float(ell if ell is not None else n), pmfs=(((0, 0.5), (2, 0.5)),) * n)

    @classmethod
    def critical_geometric(
        cls, n: int, ell: Optional[float] = None, quantile: float = 1.0 - 1e-9
    ) -> "Environment":
        """
        P(xi = j) = 2^{-j-1}, cut at the first j whose CDF reaches `quantile`
        and renormalized; the removed mass is kept in truncation_mass.
        """
        if not 0.0 < quantile < 1.0:
            raise ValueError(f"quantile must lie in (0, 1), got {quantile}")
        top = max(0, math.ceil(-math.log2(1.0 - quantile)) - 1)
        tail = 2.0 ** (-(top + 1))
        law = tuple((j, 2.0 ** (-j - 1) / (1.0 - tail)) for j in range(top + 1))
        return cls(
            n=n,
            ell=float(ell if ell is not None else n),
            pmfs=(law,) * n,
            truncation_mass=tail,
        )


def with_generation(env: Environment, i: int, pmf: Pmf) -> Environment:
    """Copy of env whose generation i follows `pmf`."""
    if not 1 <= i <= env.n:
        raise IndexError(f"generation {i} outside [1, {env.n}]")
    pmfs = list(env.pmfs)
    pmfs[i - 1] = tuple((int(v), float(p)) for v, p in pmf)
    return Environment.model_validate({**env.model_dump(), "pmfs": tuple(pmfs)})


_FAMILIES = {
    "deterministic": Environment.deterministic,
    "two_point": Environment.two_point,
    "critical_geometric": Environment.critical_geometric,
}


def environment_from_spec(spec: Dict[str, Any]) -> Environment:
    """
    Build an environment from its JSON form.

    Raises:
        EnvironmentSpecError: On an unknown family or an invalid law
    """
    try:
        if "family" in spec:
            params = {key: value for key, value in spec.items() if key != "family"}
            family = _FAMILIES.get(spec["family"])
            if family is None:
                raise EnvironmentSpecError(
                    f"Unknown environment family {spec['family']!r}; expected one of {sorted(_FAMILIES)}"
                )
            return family(**params)
        return Environment.model_validate(spec)
    except (ValidationError, ValueError, TypeError) as e:
        raise EnvironmentSpecError(f"Invalid environment: {e}") from e


def load_environment(path: Union[str, Path]) -> Environment:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise OutputError(f"Cannot read environment file {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise EnvironmentSpecError(f"Environment file {path} is not JSON: {e}") from e
    return environment_from_spec(data)


def save_environment(env: Environment, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.write_text(env.model_dump_json() + "\n")
    except OSError as e:
        raise OutputError(f"Cannot write environment file {path}: {e}") from e
    return path
