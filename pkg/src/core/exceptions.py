"""
Exception hierarchy for the fixed-degree tree lab.

Each exception that can reach the command line carries the process exit code
the CLI reports for it:

- 1: configuration problems (missing or malformed experiment file)
- 2: validation problems (invalid schedule, params or environment)
- 3: I/O problems (unreadable input, unwritable output)
"""

from typing import Any, Optional


class TreeLabError(Exception):
    """Base class for every error raised by the lab."""

    exit_code: int = 2


class ConfigError(TreeLabError):
    """
    Raised when the experiment configuration is missing or invalid.

    This includes a missing config file, YAML/JSON syntax errors, unknown keys
    and a schedule or limit slot that does not name exactly one source.
    """

    exit_code = 1


class ScheduleValidationError(TreeLabError):
    """
    Raised when an operation needs a valid schedule and gets an invalid one.

    Attributes:
        report: The ValidationReport listing every violated invariant
    """

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class EmptyScheduleError(TreeLabError):
    """Raised when a schedule describes the single-vertex tree (all D_i = 0)."""


class ProfileError(TreeLabError):
    """Raised when a profile cannot sustain coherence at the requested n."""

    def __init__(self, message: str, height: int):
        super().__init__(message)
        self.height = height


class EnumerationCapError(TreeLabError):
    """Raised when exhaustive enumeration would exceed the configured cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(
            f"Enumeration would yield {count} trees, more than the cap of {cap}"
        )
        self.count = count
        self.cap = cap


class ExtinctionError(TreeLabError):
    """Raised when a rescaled path dies out before time 1."""


class ParamsError(TreeLabError):
    """Raised when limit parameters cannot be built or loaded."""


class OutputError(TreeLabError):
    """Raised when inputs cannot be read or results cannot be written."""

    exit_code = 3


class EnvironmentSpecError(TreeLabError):
    """Raised when a branching environment cannot be built or loaded."""
