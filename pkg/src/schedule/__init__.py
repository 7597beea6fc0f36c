"""
Degree schedules: representation, validation, construction and diagnostics.
"""

from .builders import (
    DegreeMix,
    four_level_schedule,
    from_profile,
    kingman_schedule,
    named_profile,
    path_schedule,
    star_of_paths_schedule,
    star_schedule,
)
from .io import load_schedule, save_schedule, write_measure_csv
from .measures import cloud_merge_mass, merge_measure, profile_measure
from .schedule import DegreeSchedule, validate
from .tightness import (
    SplitAtomsReport,
    TightnessReport,
    check_height_ratio,
    check_split_atoms,
    check_tightness_ghp,
    tau,
    tau_window,
)

__all__ = [
    "DegreeMix",
    "DegreeSchedule",
    "SplitAtomsReport",
    "TightnessReport",
    "check_height_ratio",
    "check_split_atoms",
    "check_tightness_ghp",
    "cloud_merge_mass",
    "four_level_schedule",
    "from_profile",
    "kingman_schedule",
    "named_profile",
    "load_schedule",
    "merge_measure",
    "path_schedule",
    "profile_measure",
    "save_schedule",
    "star_of_paths_schedule",
    "star_schedule",
    "tau",
    "tau_window",
    "validate",
    "write_measure_csv",
]
