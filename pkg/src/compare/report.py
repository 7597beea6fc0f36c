"""
Convergence reports: named diagnostics with pass / warn / fail flags.

Report JSON:
    {"diagnostics": [{"name", "value", "threshold", "status", "detail"}, ...],
     "warnings": int, "failures": int, "passed": bool}
"""

import math
from pathlib import Path
from typing import List, Literal, Optional, Sequence, Tuple, Union

from loguru import logger
from pydantic import BaseModel, computed_field

from ..coalescent.limit import check_tight_gp
from ..coalescent.params import LimitParams
from ..core.config import ReportThresholds
from ..core.exceptions import OutputError
from ..schedule.measures import merge_measure
from ..schedule.schedule import DegreeSchedule
from ..schedule.tightness import check_height_ratio, check_split_atoms, check_tightness_ghp
from .statistics import atom_cloud_gap

Status = Literal["pass", "warn", "fail"]


class Diagnostic(BaseModel):
    model_config = {"frozen": True}

    name: str
    value: Optional[float] = None
    threshold: Optional[float] = None
    status: Status
    detail: str = ""


class ConvergenceReport(BaseModel):
    model_config = {"frozen": True}

    diagnostics: Tuple[Diagnostic, ...]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def warnings(self) -> int:
        return sum(d.status == "warn" for d in self.diagnostics)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def failures(self) -> int:
        return sum(d.status == "fail" for d in self.diagnostics)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return self.failures == 0

    def by_name(self, name: str) -> Diagnostic:
        for diagnostic in self.diagnostics:
            if diagnostic.name == name:
                return diagnostic
        raise KeyError(name)


def p_value_diagnostic(
    name: str, p_value: float, thresholds: ReportThresholds, detail: str = ""
) -> Diagnostic:
    if p_value < thresholds.p_fail:
        status: Status = "fail"
    elif p_value < thresholds.p_warn:
        status = "warn"
    else:
        status = "pass"
    return Diagnostic(name=name, value=p_value, threshold=thresholds.p_warn, status=status, detail=detail)


def gap_diagnostic(name: str, gap: float, tolerance: float, detail: str = "") -> Diagnostic:
    status: Status = "pass" if gap <= tolerance else "warn"
    value = gap if math.isfinite(gap) else None
    if value is None and not detail:
        detail = "gap is infinite"
    return Diagnostic(name=name, value=value, threshold=tolerance, status=status, detail=detail)


def check_diagnostic(name: str, ok: bool, detail: str = "", value: Optional[float] = None) -> Diagnostic:
    return Diagnostic(name=name, value=value, status="pass" if ok else "fail", detail=detail)


def convergence_report(diagnostics: Sequence[Diagnostic]) -> ConvergenceReport:
    """
    Collect diagnostics into one report.

    Raises:
        ValueError: If no diagnostic was computed
    """
    if not diagnostics:
        raise ValueError("convergence_report needs at least one diagnostic")
    report = ConvergenceReport(diagnostics=tuple(diagnostics))
    logger.info(
        f"Report: {len(report.diagnostics)} diagnostic(s), {report.warnings} warning(s), {report.failures} failure(s)"
    )
    return report


def schedule_diagnostics(
    schedule: DegreeSchedule,
    thresholds: ReportThresholds,
    alpha: float,
    beta: float,
    k_grid: Sequence[int],
    eps: float,
    ratio_threshold: float,
    target: Optional[LimitParams] = None,
    windows: Sequence[Tuple[float, float]] = ((0.1, 0.2), (0.4, 0.5), (0.8, 0.9)),
) -> List[Diagnostic]:
    """
    Finite-n readings of the hypotheses on one schedule.

    - height_ratio: h / n against 1
    - split_atoms: giant heights in (eps n, (1 - eps) n) and their gap / n
    - tightness_ghp: windowed tau >= log k
    - merge_windows: the merge measure charges every window (the schedule
      side of the tight-GP condition)
    - merge_mass, atom_cloud, limit_tight_gp: against a target (nu, rho, Theta)
    """
    diagnostics: List[Diagnostic] = []
    ratio = check_height_ratio(schedule)
    diagnostics.append(
        gap_diagnostic("height_ratio", abs(ratio - 1.0), thresholds.gap_warn, detail=f"h/n = {ratio:.6g}")
    )

    split = check_split_atoms(schedule, eps)
    diagnostics.append(
        Diagnostic(
            name="split_atoms",
            value=split.min_gap if math.isfinite(split.min_gap) else None,
            status="pass" if len(split.marked_heights) < 2 or split.min_gap > eps else "warn",
            detail=f"{len(split.marked_heights)} giant height(s)",
        )
    )

    tightness = check_tightness_ghp(schedule, alpha, beta, k_grid)
    diagnostics.append(
        Diagnostic(
            name="tightness_ghp",
            value=tightness.worst_margin if math.isfinite(tightness.worst_margin) else None,
            threshold=0.0,
            status="pass" if tightness.passed else "warn" if tightness.inconclusive else "fail",
            detail=f"worst k={tightness.worst_k} at height {tightness.worst_height}; "
            f"{tightness.truncated_rows} truncated window(s)",
        )
    )

    loglog = tightness.loglog_norm_over_n
    diagnostics.append(
        gap_diagnostic(
            "norm_loglog",
            loglog if loglog is not None else 0.0,
            thresholds.gap_warn,
            detail=f"||D|| = {schedule.norm}",
        )
    )

    all_weights, _ = merge_measure(schedule, 1.0)
    _, cloud = merge_measure(schedule, ratio_threshold)
    empty = [(a, b) for a, b in windows if all_weights.cdf([b])[0] - all_weights.cdf([a])[0] <= 0.0]
    diagnostics.append(
        check_diagnostic(
            "merge_windows",
            not empty,
            detail=f"windows without merge mass: {empty}" if empty else "every window charged",
        )
    )

    if target is not None:
        target_mass = target.rho.mass(0.0, 1.0) + target.theta_square_sum()
        diagnostics.append(
            gap_diagnostic(
                "merge_mass",
                abs(all_weights.total_mass - target_mass),
                thresholds.gap_warn * max(target_mass, 1.0),
                detail=f"schedule {all_weights.total_mass:.6g} vs target {target_mass:.6g}",
            )
        )
        diagnostics.append(
            gap_diagnostic("atom_cloud", atom_cloud_gap(cloud, target.theta), thresholds.gap_warn)
        )
        gp = check_tight_gp(target, windows)
        diagnostics.append(
            check_diagnostic(
                "limit_tight_gp",
                gp.passed,
                detail=f"windows with rho mass 0: {list(gp.failing_windows)}" if not gp.passed else "",
            )
        )
    return diagnostics


def write_report(report: ConvergenceReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.write_text(report.model_dump_json(indent=2) + "\n")
    except OSError as e:
        raise OutputError(f"Cannot write report {path}: {e}") from e
    return path
