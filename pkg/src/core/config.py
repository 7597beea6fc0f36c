"""
Experiment configuration.

One YAML (or JSON) file describes an experiment. Values are resolved with
the precedence command line > environment > file > defaults; the environment
may come from a .env file and knows three keys:

- TREELAB_LOG_LEVEL
- TREELAB_OUTPUT_DIR
- TREELAB_THREADS
"""

import os
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional, Tuple

import yaml
from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, Field, ValidationError, model_validator

from .exceptions import ConfigError
from .streams import MAX_SEED

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent.parent / "config.yaml"

ENV_OVERRIDES = {
    "TREELAB_LOG_LEVEL": "log_level",
    "TREELAB_OUTPUT_DIR": "output_dir",
    "TREELAB_THREADS": "threads",
}

_STRICT = {"frozen": True, "extra": "forbid"}


def _exactly_one(model: BaseModel, slots: Tuple[str, ...], label: str) -> None:
    chosen = [slot for slot in slots if getattr(model, slot) not in (None, False)]
    if len(chosen) != 1:
        raise ValueError(f"{label} must name exactly one of {list(slots)}, got {chosen or 'none'}")


class FamilySpec(BaseModel):
    """A named schedule family with its parameters."""

    model_config = _STRICT

    name: Literal["path", "four_level", "kingman", "star", "star_of_paths"]
    n: Optional[int] = Field(default=None, gt=0)
    m: Optional[int] = Field(default=None, ge=2)
    giant_heights: Tuple[int, ...] = ()
    giant_fraction: float = Field(default=0.5, gt=0.0, le=1.0)
    sizes: Tuple[int, ...] = ()
    arms: int = Field(default=2, ge=1)

    @model_validator(mode="after")
    def validate_params(self) -> "FamilySpec":
        needs_n = {"path", "kingman", "star_of_paths"}
        if self.name in needs_n and self.n is None:
            raise ValueError(f"family {self.name} needs n")
        if self.name == "kingman" and self.m is None:
            raise ValueError("family kingman needs m")
        if self.name == "star" and not self.sizes:
            raise ValueError("family star needs sizes")
        return self


class ProfileSpec(BaseModel):
    """A schedule built from a named profile."""

    model_config = _STRICT

    name: str = "sin"
    n: int = Field(gt=0)
    mix: str = "binary"
    scale: Optional[float] = Field(default=None, gt=0.0)


class ScheduleSource(BaseModel):
    model_config = _STRICT

    file: Optional[Path] = None
    family: Optional[FamilySpec] = None
    profile: Optional[ProfileSpec] = None
    gwve: bool = False

    @model_validator(mode="after")
    def validate_source(self) -> "ScheduleSource":
        _exactly_one(self, ("file", "family", "profile", "gwve"), "schedule")
        return self


class PresetSpec(BaseModel):
    """Uniform birth law, constant small-merge density, no atoms."""

    model_config = _STRICT

    name: Literal["uniform_constant_rate"] = "uniform_constant_rate"
    rate: float = Field(default=2.0, ge=0.0)


class LimitSource(BaseModel):
    model_config = _STRICT

    file: Optional[Path] = None
    preset: Optional[PresetSpec] = None
    extract: bool = False

    @model_validator(mode="after")
    def validate_source(self) -> "LimitSource":
        _exactly_one(self, ("file", "preset", "extract"), "limit")
        return self


class CompareInputs(BaseModel):
    model_config = _STRICT

    discrete: Optional[Path] = None
    limit: Optional[Path] = None
    permutations: int = Field(default=200, ge=1)


class ReportThresholds(BaseModel):
    """
    Attributes:
        p_fail: p-values below this fail
        p_warn: p-values below this warn
        gap_warn: Gaps above this warn
    """

    model_config = _STRICT

    p_fail: float = Field(default=0.001, gt=0.0, lt=1.0)
    p_warn: float = Field(default=0.01, gt=0.0, lt=1.0)
    gap_warn: float = Field(default=0.05, ge=0.0)

    @model_validator(mode="after")
    def validate_order(self) -> "ReportThresholds":
        if self.p_fail > self.p_warn:
            raise ValueError(f"p_fail {self.p_fail} must not exceed p_warn {self.p_warn}")
        return self


class DiagnosticsSpec(BaseModel):
    """Parameters of the hypothesis checks."""

    model_config = _STRICT

    alpha: float = Field(default=0.25, gt=0.0, lt=1.0)
    beta: float = Field(default=0.75, gt=0.0, lt=1.0)
    k_grid: Tuple[int, ...] = Field(default=(3, 10, 50), min_length=1)
    eps: float = Field(default=0.1, gt=0.0, lt=0.5)
    ratio_threshold: float = Field(default=0.5, gt=0.0, le=1.0)
    jump_threshold: float = Field(default=0.5, gt=0.0)
    delta: float = Field(default=0.1, gt=0.0, lt=1.0)
    a3_constant: float = Field(default=1.0, gt=0.0)
    theta_convention: Literal["post", "pre"] = "post"

    @model_validator(mode="after")
    def validate_window(self) -> "DiagnosticsSpec":
        if self.alpha >= self.beta:
            raise ValueError(f"alpha {self.alpha} must be below beta {self.beta}")
        if min(self.k_grid) < 3:
            raise ValueError(f"k_grid values must be at least 3, got {list(self.k_grid)}")
        return self


class ExperimentConfig(BaseModel):
    """
    Everything a command needs to run.

    Examples:
        >>> ExperimentConfig(schedule={"family": {"name": "path", "n": 4}}).replicates
        100
    """

    model_config = _STRICT

    seed: int = Field(default=7, ge=0, le=MAX_SEED)
    replicates: int = Field(default=100, ge=1)
    k: int = Field(default=3, ge=0)
    threads: int = Field(default=1, ge=1)
    output_dir: Path = Path("output")
    log_level: Literal["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    schedule: Optional[ScheduleSource] = None
    limit: Optional[LimitSource] = None
    environment: Optional[Dict[str, Any]] = None
    compare: CompareInputs = Field(default_factory=CompareInputs)
    thresholds: ReportThresholds = Field(default_factory=ReportThresholds)
    diagnostics: DiagnosticsSpec = Field(default_factory=DiagnosticsSpec)
    render: bool = False
    tree_format: Literal["csv", "binary"] = "csv"

    @model_validator(mode="after")
    def validate_sources(self) -> "ExperimentConfig":
        uses_gwve = (self.schedule is not None and self.schedule.gwve) or (
            self.limit is not None and self.limit.extract
        )
        if uses_gwve and self.environment is None:
            raise ValueError("schedule.gwve and limit.extract need an environment section")
        return self


def read_config_file(path: Path) -> Dict[str, Any]:
    """
    Parse a YAML or JSON experiment file into a mapping.

    Raises:
        ConfigError: If the file is missing, unreadable, empty or not a mapping
    """
    if not path.exists():
        raise ConfigError(f"Configuration file not found: {path}")
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Failed to parse configuration file {path}: {e}") from e
    except OSError as e:
        raise ConfigError(f"Error reading configuration file {path}: {e}") from e
    if data is None:
        raise ConfigError(f"Configuration file is empty: {path}")
    if not isinstance(data, dict):
        raise ConfigError(f"Configuration file {path} must hold a mapping, got {type(data).__name__}")
    return data


def environment_overrides(environ: Optional[Mapping[str, str]] = None) -> Dict[str, str]:
    environ = os.environ if environ is None else environ
    return {field: environ[key] for key, field in ENV_OVERRIDES.items() if environ.get(key)}


def load_config(
    path: Optional[Path] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    dotenv_path: Optional[Path] = None,
) -> ExperimentConfig:
    """
    Resolve the experiment configuration.

    Args:
        path: Experiment file (default: config.yaml at the project root)
        overrides: Command-line values; None entries are ignored
        dotenv_path: .env file to load (default: search from the working directory)

    Returns:
        ExperimentConfig: Validated configuration

    Raises:
        ConfigError: On a missing or malformed file or invalid values
    """
    load_dotenv(dotenv_path)
    path = Path(path) if path is not None else DEFAULT_CONFIG_PATH
    data = read_config_file(path)
    data.update(environment_overrides())
    data.update({key: value for key, value in (overrides or {}).items() if value is not None})
    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration in {path}: {e}") from e
    logger.debug(f"Loaded configuration from {path} (seed={config.seed}, replicates={config.replicates})")
    return config
