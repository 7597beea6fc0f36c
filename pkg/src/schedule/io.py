"""
Schedule files and measure exports.

Schedule JSON: {"n": int, "rows": [[[degree, count], ...], ...]}.
Measure CSV: columns t, weight.
"""

import csv
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from ..core.exceptions import OutputError, ScheduleValidationError
from ..core.models import EmpiricalMeasure1D
from .schedule import DegreeSchedule

PathLike = Union[str, Path]


def load_schedule(path: PathLike) -> DegreeSchedule:
    """
    Read a schedule JSON file.

    Raises:
        OutputError: If the file cannot be read
        ScheduleValidationError: If the content is not a schedule
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise OutputError(f"Cannot read schedule file {path}: {e}") from e
    try:
        return DegreeSchedule.model_validate_json(text)
    except ValidationError as e:
        raise ScheduleValidationError(f"Malformed schedule file {path}: {e}") from e


def dump_schedule(schedule: DegreeSchedule) -> str:
    return schedule.model_dump_json()


def save_schedule(schedule: DegreeSchedule, path: PathLike) -> Path:
    path = Path(path)
    try:
        path.write_text(dump_schedule(schedule) + "\n")
    except OSError as e:
        raise OutputError(f"Cannot write schedule file {path}: {e}") from e
    return path


def write_measure_csv(measure: EmpiricalMeasure1D, path: PathLike) -> Path:
    path = Path(path)
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["t", "weight"])
            for t, weight in measure.atoms:
                writer.writerow([repr(float(t)), repr(float(weight))])
    except OSError as e:
        raise OutputError(f"Cannot write measure file {path}: {e}") from e
    return path
