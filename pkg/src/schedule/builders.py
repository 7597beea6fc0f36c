"""
Schedule constructors: named families and profile-driven schedules.
"""

import math
from functools import reduce
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, model_validator

from ..core.exceptions import ProfileError
from .schedule import DegreeSchedule, Row, validate


def path_schedule(n: int) -> DegreeSchedule:
    """Every vertex below height n has exactly one child."""
    return DegreeSchedule(n=n, rows=tuple(((1, 1),) for _ in range(n)))


def four_level_schedule() -> DegreeSchedule:
    """The 15-vertex example with D = (4, 5, 3, 2, 0)."""
    return DegreeSchedule.from_dense(4, [[4], [3, 1, 1], [2, 1], [2]])


def kingman_schedule(
    n: int,
    m: int,
    giant_heights: Iterable[int] = (),
    giant_fraction: float = 0.5,
) -> DegreeSchedule:
    """
    Constant generation size m with one binary vertex per height.

    The root has m children; heights 1..n each hold m vertices with degrees
    (2, 1, ..., 1, 0), so every pair of lines merges at a height with
    probability 1/C(m, 2). At `giant_heights` the row is instead
    (g, 1, ..., 1) with g = round(giant_fraction * m). The height is n + 1.
    """
    if m < 2:
        raise ValueError(f"m must be at least 2, got {m}")
    giants = set(giant_heights)
    g = max(2, int(round(giant_fraction * m)))
    binary: Row = ((2, 1), (1, m - 2)) if m > 2 else ((2, 1),)
    giant: Row = ((g, 1), (1, m - g)) if m > g else ((g, 1),)
    rows: List[Row] = [((m, 1),)]
    rows.extend(giant if i in giants else binary for i in range(1, n + 1))
    return DegreeSchedule(n=n, rows=tuple(rows))


def star_schedule(sizes: Sequence[int]) -> DegreeSchedule:
    """One vertex per height carries every child: row i is (D_i)."""
    if any(size <= 0 for size in sizes):
        raise ValueError("star generation sizes must be positive")
    return DegreeSchedule(n=len(sizes), rows=tuple(((int(size), 1),) for size in sizes))


def star_of_paths_schedule(n: int, arms: int = 2) -> DegreeSchedule:
    """A root with `arms` disjoint paths of length n."""
    rows: List[Row] = [((arms, 1),)]
    rows.extend(((1, arms),) for _ in range(1, n))
    return DegreeSchedule(n=n, rows=tuple(rows))


class DegreeMix(BaseModel):
    """
    Target composition of a row: allowed degrees with vertex proportions.

    Degree 0 may appear in the mix; proportions must sum to 1.

    Examples:
        >>> DegreeMix.named("zero-four").mean_degree
        1.0
    """

    model_config = {"frozen": True}

    entries: Tuple[Tuple[int, float], ...] = Field(min_length=1)

    @model_validator(mode="after")
    def validate_entries(self) -> "DegreeMix":
        degrees = [d for d, _ in self.entries]
        if len(set(degrees)) != len(degrees):
            raise ValueError(f"Degree mix repeats a degree: {degrees}")
        if any(d < 0 for d in degrees) or any(p < 0 for _, p in self.entries):
            raise ValueError("Degree mix entries must be non-negative")
        if not math.isclose(sum(p for _, p in self.entries), 1.0, abs_tol=1e-9):
            raise ValueError("Degree mix proportions must sum to 1")
        if self.mean_degree <= 0:
            raise ValueError("Degree mix needs a positive degree with positive proportion")
        return self

    @property
    def mean_degree(self) -> float:
        return sum(d * p for d, p in self.entries)

    @property
    def positive(self) -> List[Tuple[int, float]]:
        return sorted(((d, p) for d, p in self.entries if d > 0), reverse=True)

    @property
    def granularity(self) -> int:
        """gcd of the positive degrees; row targets are rounded to multiples of it."""
        return reduce(math.gcd, (d for d, p in self.positive if p > 0))

    @classmethod
    def named(cls, name: str) -> "DegreeMix":
        try:
            return cls(entries=NAMED_MIXES[name])
        except KeyError:
            raise ValueError(
                f"Unknown degree mix '{name}', expected one of {sorted(NAMED_MIXES)}"
            ) from None


NAMED_PROFILES: Dict[str, Callable[[float], float]] = {
    "sin": lambda t: math.sin(math.pi * t),
    "constant": lambda t: 1.0,
}


def named_profile(name: str) -> Callable[[float], float]:
    try:
        return NAMED_PROFILES[name]
    except KeyError:
        raise ValueError(f"Unknown profile '{name}', expected one of {sorted(NAMED_PROFILES)}") from None


NAMED_MIXES: Dict[str, Tuple[Tuple[int, float], ...]] = {
    "unary": ((1, 1.0),),
    "all-ones": ((1, 1.0),),
    "binary": ((2, 0.5), (0, 0.5)),
    "zero-four": ((4, 0.25), (0, 0.75)),
}


def _realize_row(target: int, size: int, mix: DegreeMix) -> Row:
    """Degrees summing to `target` over at most `size` vertices, greedily."""
    remaining = target
    counts: Dict[int, int] = {}
    for degree, proportion in mix.positive:
        wanted = int(math.floor(proportion * target / mix.mean_degree + 1e-9))
        count = min(wanted, remaining // degree)
        if count:
            counts[degree] = count
            remaining -= count * degree
    if remaining:
        counts[1] = counts.get(1, 0) + remaining

    dense = np.repeat(
        np.array(sorted(counts, reverse=True), dtype=np.int64),
        [counts[d] for d in sorted(counts, reverse=True)],
    )
    excess = len(dense) - size
    if excess > 0:
        # fold the smallest excess + 1 vertices into one
        keep, folded = dense[: -(excess + 1)], dense[-(excess + 1):]
        dense = np.sort(np.append(keep, folded.sum()))[::-1]

    values, run_counts = np.unique(dense, return_counts=True)
    return tuple((int(d), int(c)) for d, c in zip(values[::-1], run_counts[::-1]))


def from_profile(
    profile: Callable[[float], float],
    n: int,
    leaf_degree_mix: Optional[DegreeMix] = None,
    scale: Optional[float] = None,
) -> DegreeSchedule:
    """
    Build a schedule whose generation sizes follow a profile.

    Targets are D_i = round(scale * profile((i + 1/2) / n)) for i < n, rounded
    to the mix granularity (at least one granule where the profile is
    positive), and D_n = 0. The root takes the largest mix degree not above
    D_0 (the smallest mix degree if none is), and height 1 absorbs the
    difference. Every other row spreads D_i children over the D_{i-1}
    vertices of its height using the mix, with degree-1 fillers for the
    remainder.

    Args:
        profile: Non-negative function on [0, 1]
        n: Height of the resulting tree
        leaf_degree_mix: Row composition rule (default: binary)
        scale: Normalizing constant c (default: n)

    Returns:
        DegreeSchedule: A valid schedule of height n

    Raises:
        ProfileError: If the profile vanishes or is invalid below height n
    """
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    mix = leaf_degree_mix or DegreeMix.named("binary")
    c = float(n if scale is None else scale)
    g = mix.granularity

    targets: List[int] = []
    for i in range(n):
        value = profile((i + 0.5) / n)
        if value < 0 or not math.isfinite(value):
            raise ProfileError(f"profile value {value} at t={(i + 0.5) / n} is not a finite non-negative number", i)
        if value == 0:
            raise ProfileError(f"profile vanishes at height {i} (t={(i + 0.5) / n}), so the tree would stop there", i)
        targets.append(max(g, g * int(round(c * value / g))))

    degrees = [d for d, p in mix.positive if p > 0]
    root = max((d for d in degrees if d <= targets[0]), default=min(degrees))
    sizes = [root] + targets[1:]
    rows: List[Row] = [((root, 1),)]
    for i in range(1, n):
        rows.append(_realize_row(sizes[i], sizes[i - 1], mix))

    schedule = DegreeSchedule(n=n, rows=tuple(rows))
    report = validate(schedule)
    if not report.is_valid:
        raise ProfileError(f"built schedule is invalid: {report.messages()[0]}", report.violations[0].height)
    logger.debug(f"Built profile schedule: n={n}, {schedule.total_vertices} vertices")
    return schedule
