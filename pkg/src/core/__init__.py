"""
Core module shared by every part of the lab.

- Domain models: VertexRef, ValidationReport, EmpiricalMeasure1D, AtomCloud, CurvePoint
- Exceptions with command-line exit codes
- Experiment configuration (YAML file + .env overrides)
- Counter-based random streams and the replicate runner
"""

from .config import ExperimentConfig, ReportThresholds, load_config
from .exceptions import (
    ConfigError,
    EmptyScheduleError,
    EnumerationCapError,
    EnvironmentSpecError,
    ExtinctionError,
    OutputError,
    ParamsError,
    ProfileError,
    ScheduleValidationError,
    TreeLabError,
)
from .models import AtomCloud, CurvePoint, EmpiricalMeasure1D, ValidationReport, VertexRef, Violation
from .runner import ReplicateRunner
from .streams import make_stream, named_stream, spawn_streams, split_stream

__all__ = [
    "AtomCloud",
    "ConfigError",
    "CurvePoint",
    "EmpiricalMeasure1D",
    "EmptyScheduleError",
    "EnumerationCapError",
    "EnvironmentSpecError",
    "ExperimentConfig",
    "ExtinctionError",
    "OutputError",
    "ParamsError",
    "ProfileError",
    "ReplicateRunner",
    "ReportThresholds",
    "ScheduleValidationError",
    "TreeLabError",
    "ValidationReport",
    "VertexRef",
    "Violation",
    "load_config",
    "make_stream",
    "named_stream",
    "spawn_streams",
    "split_stream",
]
