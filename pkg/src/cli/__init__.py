"""
Command-line interface: argument parsing, logging setup and subcommands.
"""

from .commands import (
    COMMANDS,
    cmd_check,
    cmd_compare,
    cmd_gwve,
    cmd_limit_matrix,
    cmd_matrix,
    cmd_render,
    cmd_sample_tree,
    resolve_limit_params,
    resolve_schedule,
)
from .main import build_parser, main

__all__ = [
    "COMMANDS",
    "build_parser",
    "cmd_check",
    "cmd_compare",
    "cmd_gwve",
    "cmd_limit_matrix",
    "cmd_matrix",
    "cmd_render",
    "cmd_sample_tree",
    "main",
    "resolve_limit_params",
    "resolve_schedule",
]
