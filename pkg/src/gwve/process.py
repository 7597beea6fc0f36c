"""
Sampling Galton-Watson processes in varying environment as degree schedules.

Row i of the realized schedule (0 <= i <= n - 1) holds the offspring counts of
the Z_i individuals of generation i sorted in non-increasing order, so that
D_i = Z_{i+1}. Rows past the last generation or past extinction are empty.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from ..core.exceptions import OutputError
from ..schedule.schedule import DegreeSchedule, Row
from ..schedule.tightness import check_tightness_ghp
from .environment import Environment


@dataclass(frozen=True)
class RescaledPath:
    """
    Generation sizes Z_0 = 1, ..., Z_n and the step path X_n(t) = Z_{floor(n gamma(t))} / ell.
    """

    env: Environment
    Z: np.ndarray

    def X(self, t) -> np.ndarray:
        return self.Z[self.env.generation_at(t)] / self.env.ell

    @property
    def survived(self) -> bool:
        return bool(self.Z[-1] > 0)

    @property
    def extinction_generation(self) -> Optional[int]:
        """First generation with Z = 0, None if the path survives."""
        dead = np.flatnonzero(self.Z == 0)
        return int(dead[0]) if len(dead) else None


def _offspring_row(env: Environment, i: int, size: int, rng: np.random.Generator) -> Row:
    """Sorted offspring counts of `size` individuals drawn from generation i's law."""
    values, probs = env.pmf(i)
    counts = rng.multinomial(size, probs)
    order = np.argsort(-values, kind="stable")
    return tuple((int(values[j]), int(counts[j])) for j in order if values[j] > 0 and counts[j] > 0)


def sample_gwve(env: Environment, rng: np.random.Generator) -> Tuple[RescaledPath, DegreeSchedule]:
    """
    Sample generation by generation.

    Args:
        env: Offspring laws
        rng: Random stream

    Returns:
        (RescaledPath, DegreeSchedule): the path Z and the schedule whose
        row i reorders xi_{i+1,n}(1..Z_i)
    """
    Z = np.zeros(env.n + 1, dtype=np.int64)
    Z[0] = 1
    rows: List[Row] = []
    for i in range(1, env.n + 1):
        if Z[i - 1] == 0:
            break
        row = _offspring_row(env, i, int(Z[i - 1]), rng)
        Z[i] = sum(degree * count for degree, count in row)
        if Z[i] == 0:
            logger.debug(f"Extinct at generation {i}")
            break
        rows.append(row)
    return RescaledPath(env=env, Z=Z), DegreeSchedule(n=env.n, rows=tuple(rows))


def sample_path(env: Environment, rng: np.random.Generator) -> RescaledPath:
    """Generation sizes only; stops drawing at extinction."""
    Z = np.zeros(env.n + 1, dtype=np.int64)
    Z[0] = 1
    for i in range(1, env.n + 1):
        values, probs = env.pmf(i)
        Z[i] = int(rng.multinomial(int(Z[i - 1]), probs) @ values)
        if Z[i] == 0:
            break
    return RescaledPath(env=env, Z=Z)


def survival_frequency(env: Environment, rng: np.random.Generator, replicates: int) -> float:
    """Fraction of runs with Z_n > 0."""
    if replicates < 1:
        raise ValueError(f"replicates must be at least 1, got {replicates}")
    alive = sum(sample_path(env, rng).survived for _ in range(replicates))
    logger.debug(f"Survival {alive}/{replicates} at n={env.n}")
    return alive / replicates


class TightnessFrequency(BaseModel):
    """How often surviving realizations pass the windowed tau >= log k criterion."""

    model_config = {"frozen": True}

    replicates: int = Field(ge=1)
    survived: int = Field(ge=0)
    passed: int = Field(ge=0)

    @property
    def frequency(self) -> Optional[float]:
        return self.passed / self.survived if self.survived else None


def gwve_tightness_frequency(
    env: Environment,
    rng: np.random.Generator,
    replicates: int,
    alpha: float,
    beta: float,
    k_grid: Sequence[int],
) -> TightnessFrequency:
    """
    Run check_tightness_ghp on realized schedules, conditioning on survival.

    k values above the realized max_i Z_i are dropped for that realization.
    """
    survived = passed = 0
    for _ in range(replicates):
        path, schedule = sample_gwve(env, rng)
        if not path.survived:
            continue
        survived += 1
        usable = [k for k in k_grid if k <= schedule.norm]
        if not usable:
            passed += 1
            continue
        if check_tightness_ghp(schedule, alpha, beta, usable).passed:
            passed += 1
    logger.info(f"GWVE tightness: {passed}/{survived} surviving runs pass ({replicates} runs)")
    return TightnessFrequency(replicates=replicates, survived=survived, passed=passed)


def write_path_csv(path: RescaledPath, out: Union[str, Path]) -> Path:
    """Columns generation, t, Z, X with t = gamma^{-1}(i / n)."""
    out = Path(out)
    times = path.env.generation_times()
    try:
        with open(out, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["generation", "t", "Z", "X"])
            for i, z in enumerate(path.Z):
                writer.writerow([i, repr(float(times[i])), int(z), repr(float(z / path.env.ell))])
    except OSError as e:
        raise OutputError(f"Cannot write path file {out}: {e}") from e
    return out
