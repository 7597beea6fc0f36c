"""
Tightness functionals of a degree schedule.

tau_i(k) = sum_j (d_{i,j}/D_i) * min(k (d_{i,j} - 1)/(D_i - 1), 1)
measures how fast k ancestor lines crossing height i merge; it is +inf when
D_i is 0 or 1. Windows of tau are compared against log k to diagnose tightness
of the rescaled trees, and large-degree heights are checked for separation.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from .schedule import DegreeSchedule


def tau(schedule: DegreeSchedule, i: int, k: int) -> float:
    """
    Evaluate tau_i(k) for one height.

    Examples:
        >>> from .builders import four_level_schedule
        >>> tau(four_level_schedule(), 1, 1)
        0.3
    """
    if i < 0:
        raise ValueError(f"height must be non-negative, got {i}")
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    D_i = schedule.row_sum(i)
    if D_i <= 1:
        return math.inf
    total = 0.0
    for degree, count in schedule.row(i):
        total += count * (degree / D_i) * min(k * (degree - 1) / (D_i - 1), 1.0)
    return total


def tau_profile(schedule: DegreeSchedule, k: int) -> np.ndarray:
    """tau_i(k) for every height 0..h."""
    return np.array([tau(schedule, i, k) for i in range(schedule.h + 1)], dtype=float)


def tau_window(schedule: DegreeSchedule, a: int, b: int, k: int) -> float:
    """Sum of tau_i(k) over heights a..b inclusive."""
    if a > b:
        raise ValueError(f"window start {a} exceeds end {b}")
    return float(sum(tau(schedule, i, k) for i in range(a, b + 1)))


class KMargin(BaseModel):
    """Worst window margin for one k."""

    model_config = {"frozen": True}

    k: int
    window: float = Field(description="Window length n / (log log k)^2")
    min_margin: float
    worst_height: Optional[int] = None
    truncated_rows: int = 0


class TightnessReport(BaseModel):
    """
    Outcome of the window criterion tau over [i, i + n/(log log k)^2] >= log k.

    Rows whose window runs past the top of the tree are counted as truncated
    and excluded from the verdict. With no complete window the report is
    inconclusive and does not pass.
    """

    model_config = {"frozen": True}

    passed: bool
    inconclusive: bool = False
    worst_margin: float
    worst_height: Optional[int] = None
    worst_k: Optional[int] = None
    evaluated_rows: int
    truncated_rows: int
    loglog_norm_over_n: Optional[float] = Field(
        default=None, description="log log ||D|| / n; None when ||D|| <= e"
    )
    per_k: Tuple[KMargin, ...] = ()


def check_tightness_ghp(
    schedule: DegreeSchedule, alpha: float, beta: float, k_grid: Sequence[int]
) -> TightnessReport:
    """
    Evaluate the "tau window >= log k" criterion on heights [alpha n, beta n].

    Args:
        schedule: Valid schedule
        alpha: Lower height fraction, 0 < alpha < beta
        beta: Upper height fraction, beta < 1
        k_grid: Values of k, each at least 3

    Returns:
        TightnessReport: verdict, worst margin and the log log ||D|| / n scalar

    Raises:
        ValueError: On an empty k_grid, k < 3 or alpha/beta out of range
    """
    if not k_grid:
        raise ValueError("k_grid must not be empty")
    if not 0.0 < alpha < beta < 1.0:
        raise ValueError(f"need 0 < alpha < beta < 1, got alpha={alpha}, beta={beta}")
    for k in k_grid:
        if k < 3:
            raise ValueError(f"k_grid entries must be at least 3, got {k}")
        if k > schedule.norm:
            logger.warning(f"k={k} exceeds ||D||={schedule.norm}; evaluating anyway")

    n, h = schedule.n, schedule.h
    last = h - 1
    start = math.ceil(alpha * n)
    stop = math.floor(beta * n)
    heights = range(start, stop + 1)

    per_k: List[KMargin] = []
    worst = (math.inf, None, None)
    evaluated = truncated = 0
    for k in k_grid:
        values = tau_profile(schedule, k)[: max(last + 1, 0)]
        finite = np.where(np.isinf(values), 0.0, values)
        prefix = np.concatenate([[0.0], np.cumsum(finite)])
        inf_prefix = np.concatenate([[0], np.cumsum(np.isinf(values))])
        window = n / math.log(math.log(k)) ** 2
        threshold = math.log(k)

        k_worst, k_height, k_truncated = math.inf, None, 0
        for i in heights:
            end = math.floor(i + window)
            if i > last or end > last:
                k_truncated += 1
                continue
            if inf_prefix[end + 1] - inf_prefix[i] > 0:
                margin = math.inf
            else:
                margin = float(prefix[end + 1] - prefix[i]) - threshold
            evaluated += 1
            if margin < k_worst:
                k_worst, k_height = margin, i

        truncated += k_truncated
        if k_truncated:
            logger.warning(
                f"k={k}: {k_truncated} window(s) of length {window:.1f} run past height {last}; marked truncated"
            )
        per_k.append(
            KMargin(k=k, window=window, min_margin=k_worst, worst_height=k_height, truncated_rows=k_truncated)
        )
        if k_worst < worst[0]:
            worst = (k_worst, k_height, k)

    loglog = None
    if schedule.norm > math.e:
        loglog = math.log(math.log(schedule.norm)) / n

    if not evaluated:
        logger.warning(f"No complete window on heights {start}..{stop}; tightness verdict is inconclusive")
    report = TightnessReport(
        passed=evaluated > 0 and worst[0] >= 0.0,
        inconclusive=not evaluated,
        worst_margin=worst[0],
        worst_height=worst[1],
        worst_k=worst[2],
        evaluated_rows=evaluated,
        truncated_rows=truncated,
        loglog_norm_over_n=loglog,
        per_k=tuple(per_k),
    )
    logger.debug(f"Tightness check: passed={report.passed}, worst margin {report.worst_margin}")
    return report


class SplitAtomsReport(BaseModel):
    """Heights carrying a giant vertex and their minimum separation."""

    model_config = {"frozen": True}

    eps: float
    marked_heights: Tuple[int, ...]
    min_gap: float


def check_split_atoms(schedule: DegreeSchedule, eps: float) -> SplitAtomsReport:
    """
    Find heights in (eps n, (1 - eps) n) with d_{i,1} > eps D_i.

    The minimum gap between consecutive marked heights, divided by n, is +inf
    when at most one height is marked.
    """
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    n = schedule.n
    marked = []
    for i in range(schedule.h):
        if not eps * n < i < (1.0 - eps) * n:
            continue
        row = schedule.row(i)
        if row and row[0][0] > eps * schedule.row_sum(i):
            marked.append(i)
    gaps = np.diff(marked)
    min_gap = float(gaps.min()) / n if len(gaps) else math.inf
    return SplitAtomsReport(eps=eps, marked_heights=tuple(marked), min_gap=min_gap)


def check_height_ratio(schedule: DegreeSchedule) -> float:
    """h / n; the height hypothesis asks this to tend to 1."""
    return schedule.h / schedule.n
