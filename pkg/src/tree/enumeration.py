"""
Exhaustive enumeration of the trees realizing a small schedule.

Used as an exact oracle for the sampler: every distinct parent assignment is
produced once and carries probability 1 / count under the uniform law.
"""

import itertools
from math import factorial, prod
from typing import Iterator, Tuple

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from ..core.exceptions import EnumerationCapError, ScheduleValidationError
from ..schedule.schedule import DegreeSchedule, validate
from .tree import Tree

DEFAULT_CAP = 10**6


def count_trees(schedule: DegreeSchedule) -> int:
    """Product over heights of D_i! / prod_j d_{i,j}!."""
    total = 1
    for i in range(schedule.h):
        D_i = schedule.row_sum(i)
        total *= factorial(D_i) // prod(factorial(d) ** c for d, c in schedule.row(i))
    return total


def enumerate_trees(
    schedule: DegreeSchedule, cap: int = DEFAULT_CAP
) -> Iterator[Tuple[Tree, float]]:
    """
    Yield every tree realizing the schedule with its probability.

    Args:
        schedule: Valid schedule
        cap: Maximum number of trees to enumerate

    Yields:
        Tuple[Tree, float]: (tree, 1 / count)

    Raises:
        ScheduleValidationError: If the schedule is invalid
        EnumerationCapError: If the number of trees exceeds `cap`
    """
    report = validate(schedule)
    if not report.is_valid:
        raise ScheduleValidationError("Cannot enumerate an invalid schedule", report)
    count = count_trees(schedule)
    if count > cap:
        raise EnumerationCapError(count, cap)

    per_height = []
    for i in range(schedule.h):
        degrees = schedule.degrees(i)
        slots = np.repeat(np.arange(len(degrees)), degrees).tolist()
        per_height.append(list(multiset_permutations(slots)))

    probability = 1.0 / count
    empty = np.zeros(0, dtype=np.int64)
    for assignment in itertools.product(*per_height):
        parents = [empty] + [np.array(p, dtype=np.int64) for p in assignment]
        yield Tree(schedule, parents), probability
