"""
Schedule-level empirical measures.

- profile_measure: normalized generation sizes, the prelimit of the birth law
- merge_measure: pairwise merge weights C(d,2)/C(D,2), split at a degree-ratio
  threshold into a small-merge measure and a large-degree atom cloud
"""

from math import comb
from typing import Dict, List, Tuple

from loguru import logger

from ..core.exceptions import EmptyScheduleError
from ..core.models import AtomCloud, EmpiricalMeasure1D
from .schedule import DegreeSchedule


def profile_measure(schedule: DegreeSchedule) -> EmpiricalMeasure1D:
    """
    Return sum_i delta_{i/n} D_i / sum D, restricted to heights with D_i > 0.

    Heights above n are placed at 1, so a schedule taller than its scaling
    index keeps its mass inside [0, 1].

    Raises:
        EmptyScheduleError: If every D_i is 0
    """
    total = int(schedule.D.sum())
    if total == 0:
        raise EmptyScheduleError("Schedule describes the single-vertex tree (all D_i = 0)")
    weights: Dict[float, float] = {}
    for i, D_i in enumerate(schedule.D):
        if D_i > 0:
            t = min(i / schedule.n, 1.0)
            weights[t] = weights.get(t, 0.0) + int(D_i) / total
    if schedule.h > schedule.n + 1:
        logger.warning(f"Heights {schedule.n + 1}..{schedule.h - 1} exceed n={schedule.n}; their mass sits at 1")
    return EmpiricalMeasure1D(atoms=tuple(weights.items()))


def merge_measure(
    schedule: DegreeSchedule, ratio_threshold: float = 1.0
) -> Tuple[EmpiricalMeasure1D, AtomCloud]:
    """
    Split the pairwise merge weights of rows 1 <= i < n at a degree ratio.

    Every positive entry d_{i,j} of a row with D_i >= 2 carries weight
    C(d,2)/C(D_i,2). Entries with d <= ratio_threshold * D_i are added to the
    measure at i/n; the others become cloud points (i/n, d/D_i), one per vertex.

    Args:
        schedule: Schedule to read
        ratio_threshold: Threshold in (0, 1]; 1 yields an empty cloud

    Returns:
        Tuple[EmpiricalMeasure1D, AtomCloud]: (small-merge measure, cloud)
    """
    if not 0.0 < ratio_threshold <= 1.0:
        raise ValueError(f"ratio_threshold must lie in (0, 1], got {ratio_threshold}")

    atoms: List[Tuple[float, float]] = []
    points: List[Tuple[float, float]] = []
    for i in range(1, min(schedule.n, schedule.h)):
        D_i = schedule.row_sum(i)
        if D_i < 2:
            continue
        pairs = comb(D_i, 2)
        weight = 0.0
        for degree, count in schedule.row(i):
            if degree <= ratio_threshold * D_i:
                weight += count * comb(degree, 2) / pairs
            else:
                points.extend([(i / schedule.n, degree / D_i)] * count)
        if weight > 0.0:
            atoms.append((i / schedule.n, weight))

    logger.debug(
        f"Merge measure: {len(atoms)} atom(s), {len(points)} cloud point(s) "
        f"at threshold {ratio_threshold}"
    )
    return EmpiricalMeasure1D(atoms=tuple(atoms)), AtomCloud(points=tuple(points))


def cloud_merge_mass(schedule: DegreeSchedule, ratio_threshold: float) -> float:
    """Total weight C(d,2)/C(D,2) carried by the cloud at this threshold."""
    mass = 0.0
    for i in range(1, min(schedule.n, schedule.h)):
        D_i = schedule.row_sum(i)
        if D_i < 2:
            continue
        for degree, count in schedule.row(i):
            if degree > ratio_threshold * D_i:
                mass += count * comb(degree, 2) / comb(D_i, 2)
    return mass
