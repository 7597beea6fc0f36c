"""
Degree schedules: the prescription of child counts per height.

A schedule fixes, for every height i and slot j, the number of children
d_{i,j} of vertex (i, j). Rows are stored sparsely as (degree, count) pairs in
decreasing degree order; vertices of degree 0 are implicit, so a row of a
height with G vertices lists at most G positive-degree vertices.

Derived quantities:
- D_i: row sum, the number of vertices at height i + 1
- h: height of the tree, the first height whose row is empty
"""

from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..core.models import ValidationReport, Violation

Row = Tuple[Tuple[int, int], ...]


class DegreeSchedule(BaseModel):
    """
    Immutable degree schedule.

    The constructor only checks the storage format (non-negative integers);
    the model's invariants (non-increasing rows, single root, coherence) are
    checked by `validate` so that invalid schedules can still be inspected.

    Attributes:
        n: Scaling index; height i is read as time i/n
        rows: Row i as (degree, count) pairs

    Examples:
        >>> s = DegreeSchedule(n=4, rows=(((4, 1),), ((3, 1), (1, 2)), ((2, 1), (1, 1)), ((2, 1),)))
        >>> s.D.tolist()
        [4, 5, 3, 2, 0]
        >>> s.h
        4
    """

    model_config = {"frozen": True}

    n: int = Field(gt=0, description="Scaling index")
    rows: Tuple[Row, ...] = Field(default=(), description="Sparse rows by height")

    @field_validator("rows")
    @classmethod
    def validate_storage(cls, rows: Tuple[Row, ...]) -> Tuple[Row, ...]:
        for i, row in enumerate(rows):
            for degree, count in row:
                if degree < 0 or count < 0:
                    raise ValueError(
                        f"Row {i} has a negative entry ({degree}, {count})"
                    )
        return rows

    @classmethod
    def from_dense(cls, n: int, rows: Sequence[Sequence[int]]) -> "DegreeSchedule":
        """
        Build a schedule from explicit degree lists, one list per height.

        Zero degrees are dropped; equal neighbouring degrees are run-length
        encoded without reordering, so a dense row that is not non-increasing
        stays detectable by `validate`.

        Examples:
            >>> DegreeSchedule.from_dense(2, [[2], [1, 1, 0]]).rows
            (((2, 1),), ((1, 2),))
        """
        sparse: List[Row] = []
        for row in rows:
            pairs: List[List[int]] = []
            for degree in row:
                if degree == 0:
                    continue
                if pairs and pairs[-1][0] == degree:
                    pairs[-1][1] += 1
                else:
                    pairs.append([int(degree), 1])
            sparse.append(tuple((d, c) for d, c in pairs))
        return cls(n=n, rows=tuple(sparse))

    @cached_property
    def D(self) -> np.ndarray:
        """Row sums D_0, ..., D_h (the last entry is 0)."""
        sums = [sum(d * c for d, c in row) for row in self.rows[: self.h]]
        return np.array(sums + [0], dtype=np.int64)

    @cached_property
    def h(self) -> int:
        for i, row in enumerate(self.rows):
            if not any(d > 0 and c > 0 for d, c in row):
                return i
        return len(self.rows)

    @cached_property
    def norm(self) -> int:
        """The sup norm of D."""
        return int(self.D.max())

    @cached_property
    def total_vertices(self) -> int:
        return 1 + int(self.D.sum())

    def row(self, i: int) -> Row:
        if i < 0:
            raise ValueError(f"height must be non-negative, got {i}")
        return self.rows[i] if i < len(self.rows) else ()

    def row_sum(self, i: int) -> int:
        if i < 0:
            raise ValueError(f"height must be non-negative, got {i}")
        return int(self.D[i]) if i <= self.h else 0

    def generation_size(self, i: int) -> int:
        """Number of vertices at height i (1 at the root)."""
        if i == 0:
            return 1
        return self.row_sum(i - 1)

    def degrees(self, i: int) -> np.ndarray:
        """Dense positive degrees of row i, in slot order."""
        row = self.row(i)
        if not row:
            return np.zeros(0, dtype=np.int64)
        degrees, counts = zip(*row)
        return np.repeat(np.array(degrees, dtype=np.int64), np.array(counts, dtype=np.int64))

    def degree_of(self, i: int, j: int) -> int:
        """Degree of vertex (i, j), j being 1-based."""
        position = j - 1
        for degree, count in self.row(i):
            if position < count:
                return degree
            position -= count
        return 0

    def positive_count(self, i: int) -> int:
        return sum(c for d, c in self.row(i) if d > 0)


def validate(schedule: DegreeSchedule) -> ValidationReport:
    """
    List every violated schedule invariant with its height.

    Checks that each row is non-increasing with positive counts, that only
    the root carries a positive degree at height 0, and the coherence
    condition #{j : d_{i+1,j} > 0} <= D_i.

    Args:
        schedule: Schedule to inspect

    Returns:
        ValidationReport: empty when the schedule is valid
    """
    violations: List[Violation] = []

    for i, row in enumerate(schedule.rows):
        previous = None
        for degree, count in row:
            if count == 0:
                violations.append(Violation(height=i, message=f"degree {degree} has count 0"))
            if degree == 0:
                violations.append(Violation(height=i, message="zero degree stored explicitly"))
            if previous is not None and degree >= previous:
                violations.append(
                    Violation(height=i, message=f"row {i} is not non-increasing")
                )
                break
            previous = degree

    if schedule.positive_count(0) > 1:
        violations.append(Violation(height=0, message="root row has two positive degrees"))

    sizes = [1] + [sum(d * c for d, c in row) for row in schedule.rows]
    for i in range(1, len(schedule.rows)):
        positive = schedule.positive_count(i)
        if positive > sizes[i]:
            violations.append(
                Violation(
                    height=i,
                    message=(
                        f"coherence fails: {positive} positive degrees at height {i} "
                        f"but only {sizes[i]} vertices"
                    ),
                )
            )

    return ValidationReport(violations=tuple(violations))
