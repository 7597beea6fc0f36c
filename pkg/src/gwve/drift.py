"""
Drift statistics of an environment and the conditions on their limits.

With xi_bar = (xi - 1) / ell:
- alpha_{i,n} = E[xi_bar / (1 + xi_bar^2)], beta_{i,n} = E[xi_bar^2 / (1 + xi_bar^2)]
- alpha_n(t) = ell * sum of alpha_{i,n} over generations 1..floor(n gamma(t))
- beta_n(t) = ell / 2 * the same sum of beta_{i,n}
- mu_n([x, inf) x (0, t]) = ell * sum of P(xi_bar_{i,n} >= x)

All expectations are exact sums over the finite supports.
"""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from ..core.exceptions import OutputError
from .environment import Environment

MuAtom = Tuple[float, float, float]


@dataclass(frozen=True)
class GridFunction:
    """Function known on an increasing grid, linear in between."""

    t: np.ndarray
    values: np.ndarray

    def __call__(self, s) -> np.ndarray:
        return np.interp(np.asarray(s, dtype=float), self.t, self.values)


@dataclass(frozen=True)
class DriftStats:
    """
    Per-generation alpha_{i,n}, beta_{i,n} and the cumulative statistics.

    Attributes:
        env: Environment the statistics belong to
        alpha: alpha_{i,n} at index i - 1
        beta: beta_{i,n} at index i - 1
    """

    env: Environment
    alpha: np.ndarray
    beta: np.ndarray
    _supports: Tuple[Tuple[np.ndarray, np.ndarray], ...] = field(repr=False)

    def _cumulative(self, per_generation: np.ndarray, t) -> np.ndarray:
        prefix = np.concatenate([[0.0], np.cumsum(per_generation)])
        return self.env.ell * prefix[self.env.generation_at(t)]

    def alpha_cum(self, t) -> np.ndarray:
        return self._cumulative(self.alpha, t)

    def beta_cum(self, t) -> np.ndarray:
        return 0.5 * self._cumulative(self.beta, t)

    def alpha_variation(self, t) -> np.ndarray:
        """Total variation of the step function alpha_n on [0, t]."""
        return self._cumulative(np.abs(self.alpha), t)

    def tail(self, i: int, x: float) -> float:
        """P(xi_bar_{i,n} >= x)."""
        xi_bar, probs = self._supports[i - 1]
        return float(probs[xi_bar >= x].sum())

    def mu_tail(self, x: float, t) -> np.ndarray:
        """mu_n([x, inf) x (0, t])."""
        if x <= 0:
            raise ValueError(f"x must be positive, got {x}")
        tails = np.array([self.tail(i, x) for i in range(1, self.env.n + 1)])
        return self._cumulative(tails, t)


def drift_stats(env: Environment) -> DriftStats:
    supports = []
    alpha = np.empty(env.n)
    beta = np.empty(env.n)
    for i in range(1, env.n + 1):
        values, probs = env.pmf(i)
        xi_bar = (values - 1) / env.ell
        denominator = 1.0 + xi_bar**2
        alpha[i - 1] = float(probs @ (xi_bar / denominator))
        beta[i - 1] = float(probs @ (xi_bar**2 / denominator))
        supports.append((xi_bar, probs))
    return DriftStats(env=env, alpha=alpha, beta=beta, _supports=tuple(supports))


def mu_atoms(stats: DriftStats) -> List[MuAtom]:
    """mu_n as atoms (x, t_i, ell * P(xi_bar_i = x)) over x > 0."""
    times = stats.env.generation_times()
    atoms: List[MuAtom] = []
    for i in range(1, stats.env.n + 1):
        xi_bar, probs = stats._supports[i - 1]
        for x, p in zip(xi_bar, probs):
            if x > 0 and p > 0:
                atoms.append((float(x), float(times[i]), float(stats.env.ell * p)))
    return atoms


def beta_tilde(
    beta: Union[Callable[[np.ndarray], np.ndarray], Sequence[float]],
    mu: Sequence[MuAtom],
    t_grid: Sequence[float],
    closed: bool = False,
) -> GridFunction:
    """
    beta(t) - 1/2 * integral of x^2 / (1 + x^2) against mu over (0, inf) x (0, t).

    Args:
        beta: Cumulative beta as a function of t or its values on t_grid
        mu: Atoms (x, t, mass) of the tail measure
        t_grid: Increasing evaluation grid
        closed: Integrate over (0, t] instead of (0, t)

    Returns:
        GridFunction: beta tilde on t_grid
    """
    t = np.asarray(t_grid, dtype=float)
    base = np.asarray(beta(t) if callable(beta) else beta, dtype=float)
    if base.shape != t.shape:
        raise ValueError(f"beta has {base.shape} values for a grid of {t.shape}")
    removed = np.zeros_like(t)
    for x, when, mass in mu:
        weight = 0.5 * x * x / (1.0 + x * x) * mass
        hit = t >= when if closed else t > when
        removed = removed + np.where(hit, weight, 0.0)
    values = base - removed
    if np.any(np.diff(values) < -1e-12):
        drop = float(np.min(np.diff(values)))
        logger.warning(f"beta tilde decreases (largest drop {drop:.3g}); beta and mu look inconsistent")
    return GridFunction(t=t, values=values)


def plugin_beta_tilde(stats: DriftStats) -> GridFunction:
    """beta tilde built from beta_n and mu_n on the generation grid."""
    grid = stats.env.generation_times()
    return beta_tilde(stats.beta_cum(grid), mu_atoms(stats), grid, closed=True)


def check_A3(env: Environment, C: float) -> float:
    """inf over generations of E[xi 1{xi <= C ell}]."""
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    cutoff = C * env.ell
    worst = math.inf
    for i in range(1, env.n + 1):
        values, probs = env.pmf(i)
        worst = min(worst, float(probs @ np.where(values <= cutoff, values, 0)))
    return worst


def _zero(t) -> np.ndarray:
    return np.zeros_like(np.asarray(t, dtype=float))


def _zero_tail(x: float, t) -> np.ndarray:
    return _zero(t)


def _no_atom(x: float) -> float:
    return 0.0


@dataclass(frozen=True)
class CandidateJump:
    """
    A jump time of the candidate limits.

    Attributes:
        t: Jump time
        delta_alpha: Jump of alpha at t
        delta_beta: Jump of beta at t
        mu_tail: x -> mu([x, inf) x {t})
    """

    t: float
    delta_alpha: float = 0.0
    delta_beta: float = 0.0
    mu_tail: Callable[[float], float] = _no_atom


@dataclass(frozen=True)
class LimitCandidate:
    """Candidate limits alpha(t), beta(t) and mu([x, inf) x (0, t])."""

    alpha: Callable[[np.ndarray], np.ndarray] = _zero
    beta: Callable[[np.ndarray], np.ndarray] = _zero
    mu_tail: Callable[[float, np.ndarray], np.ndarray] = _zero_tail
    jumps: Tuple[CandidateJump, ...] = ()


class ContinuityGap(BaseModel):
    """Sup gaps between one environment's statistics and the candidate on the continuity grid."""

    model_config = {"frozen": True}

    n: int
    alpha_gap: float = Field(ge=0.0)
    variation_gap: float = Field(ge=0.0)
    beta_gap: float = Field(ge=0.0)
    mu_gap: float = Field(ge=0.0)

    @property
    def largest(self) -> float:
        return max(self.alpha_gap, self.variation_gap, self.beta_gap, self.mu_gap)


class JumpGap(BaseModel):
    """Single-generation quantities at a candidate jump time."""

    model_config = {"frozen": True}

    n: int
    t: float
    generation: int
    alpha_jump: float
    beta_jump: float
    alpha_gap: float = Field(ge=0.0)
    beta_gap: float = Field(ge=0.0)
    mu_gap: float = Field(ge=0.0)


class DriftConvergenceReport(BaseModel):
    """Gaps per n, sorted by n."""

    model_config = {"frozen": True}

    continuity: Tuple[ContinuityGap, ...]
    jumps: Tuple[JumpGap, ...] = ()

    def gaps_shrink(self) -> bool:
        """Largest continuity gap at the biggest n is below the one at the smallest n."""
        if len(self.continuity) < 2:
            return False
        return self.continuity[-1].largest < self.continuity[0].largest


def check_A1_A2(
    env_family: Sequence[Environment],
    candidate: LimitCandidate,
    t_grid: Optional[Sequence[float]] = None,
    x_grid: Sequence[float] = (0.25, 0.5, 2.0),
) -> DriftConvergenceReport:
    """
    Compare drift statistics of an environment family with candidate limits.

    Continuity gaps are taken on t_grid with candidate jump times removed;
    x_grid should avoid the x-atoms of mu. At each candidate jump time t the
    jumps ell * alpha_{i,n}, ell / 2 * beta_{i,n} and ell * P(xi_bar_{i,n} >= x)
    of generation i = floor(n gamma(t)) are compared with the candidate jumps.

    Raises:
        ValueError: With fewer than two environments
    """
    if len(env_family) < 2:
        raise ValueError("check_A1_A2 needs environments for at least two values of n")
    t = np.linspace(0.0, 1.0, 101) if t_grid is None else np.asarray(t_grid, dtype=float)
    for jump in candidate.jumps:
        t = t[~np.isclose(t, jump.t)]

    alpha_target = np.asarray(candidate.alpha(t), dtype=float)
    variation_target = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(alpha_target)))])
    beta_target = np.asarray(candidate.beta(t), dtype=float)

    continuity: List[ContinuityGap] = []
    jumps: List[JumpGap] = []
    for env in sorted(env_family, key=lambda e: e.n):
        stats = drift_stats(env)
        mu_gap = max(
            (float(np.max(np.abs(stats.mu_tail(x, t) - candidate.mu_tail(x, t)))) for x in x_grid),
            default=0.0,
        )
        row = ContinuityGap(
            n=env.n,
            alpha_gap=float(np.max(np.abs(stats.alpha_cum(t) - alpha_target))),
            variation_gap=float(np.max(np.abs(stats.alpha_variation(t) - variation_target))),
            beta_gap=float(np.max(np.abs(stats.beta_cum(t) - beta_target))),
            mu_gap=mu_gap,
        )
        continuity.append(row)
        logger.debug(f"A1 gaps at n={env.n}: largest {row.largest:.3g}")

        for jump in candidate.jumps:
            i = int(env.generation_at(jump.t))
            if i < 1:
                logger.warning(f"Jump time {jump.t} maps to generation 0 at n={env.n}; skipped")
                continue
            alpha_jump = env.ell * float(stats.alpha[i - 1])
            beta_jump = 0.5 * env.ell * float(stats.beta[i - 1])
            jumps.append(
                JumpGap(
                    n=env.n,
                    t=jump.t,
                    generation=i,
                    alpha_jump=alpha_jump,
                    beta_jump=beta_jump,
                    alpha_gap=abs(alpha_jump - jump.delta_alpha),
                    beta_gap=abs(beta_jump - jump.delta_beta),
                    mu_gap=max(
                        (abs(env.ell * stats.tail(i, x) - jump.mu_tail(x)) for x in x_grid),
                        default=0.0,
                    ),
                )
            )
    return DriftConvergenceReport(continuity=tuple(continuity), jumps=tuple(jumps))


def write_drift_csv(stats: DriftStats, path: Union[str, Path]) -> Path:
    """Columns generation, t, alpha_i, beta_i, alpha_n, beta_n, variation on the generation grid."""
    path = Path(path)
    times = stats.env.generation_times()
    alpha_n = stats.alpha_cum(times)
    beta_n = stats.beta_cum(times)
    variation = stats.alpha_variation(times)
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["generation", "t", "alpha_i", "beta_i", "alpha_n", "beta_n", "variation"])
            for i in range(1, stats.env.n + 1):
                writer.writerow(
                    [
                        i,
                        repr(float(times[i])),
                        repr(float(stats.alpha[i - 1])),
                        repr(float(stats.beta[i - 1])),
                        repr(float(alpha_n[i])),
                        repr(float(beta_n[i])),
                        repr(float(variation[i])),
                    ]
                )
    except OSError as e:
        raise OutputError(f"Cannot write drift file {path}: {e}") from e
    return path
