#!/usr/bin/env python3
"""
Tree Lab setup check.

Runs a fixed list of checks before any long experiment:
- every src package imports
- config.yaml loads into an ExperimentConfig with a schedule source
- .env (optional) only sets known TREELAB_ keys
- every distribution in requirements.txt is installed
- seeded streams reproduce, serial and threaded
- output/ can be created and written

Usage:
    python verify_setup.py
    python verify_setup.py --verbose

Exit code 0 when every check passes, 1 otherwise, 130 on interrupt.
"""

import argparse
import importlib
import re
import sys
from importlib import metadata
from pathlib import Path
from typing import Callable, List, NamedTuple, Optional

from loguru import logger

PROJECT_ROOT = Path(__file__).parent.resolve()
PACKAGES = ("core", "schedule", "tree", "coalescent", "trail", "gwve", "compare", "cli")
REQUIREMENT_NAME = re.compile(r"^\s*([A-Za-z0-9][A-Za-z0-9._-]*)")


class CheckResult(NamedTuple):
    name: str
    passed: bool
    details: str = ""


def requirement_names(text: str) -> List[str]:
    """Distribution names of a requirements file, comments and blanks skipped."""
    names = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        match = REQUIREMENT_NAME.match(line)
        if match:
            names.append(match.group(1))
    return names


class SetupVerifier:
    """
    Runs the setup checks against one project root.

    Each check returns its results instead of printing, so a check can be
    run on its own (and tested) against a temporary directory.
    """

    def __init__(self, project_root: Path = PROJECT_ROOT):
        self.project_root = Path(project_root)

    @property
    def checks(self) -> List[Callable[[], List[CheckResult]]]:
        return [
            self.check_packages,
            self.check_experiment_file,
            self.check_overrides,
            self.check_requirements,
            self.check_streams,
            self.check_output_dir,
        ]

    def check_packages(self) -> List[CheckResult]:
        results = []
        for name in PACKAGES:
            module = f"src.{name}"
            try:
                importlib.import_module(module)
                results.append(CheckResult(f"import {module}", True))
            except Exception as e:
                results.append(CheckResult(f"import {module}", False, f"{type(e).__name__}: {e}"))
        return results

    def check_experiment_file(self) -> List[CheckResult]:
        path = self.project_root / "config.yaml"
        if not path.exists():
            return [CheckResult("config.yaml", False, f"not found at {path}")]

        from src.core.config import load_config
        from src.core.exceptions import ConfigError

        try:
            config = load_config(path, dotenv_path=self.project_root / ".env")
        except ConfigError as e:
            return [CheckResult("config.yaml", False, str(e))]
        results = [
            CheckResult("config.yaml", True, f"seed={config.seed}, replicates={config.replicates}, k={config.k}")
        ]
        if config.schedule is None:
            results.append(CheckResult("schedule source", False, "config.yaml has no schedule section"))
        else:
            results.append(CheckResult("schedule source", True))
        return results

    def check_overrides(self) -> List[CheckResult]:
        if not (self.project_root / ".env.example").exists():
            return [CheckResult(".env.example", False, "template missing")]
        dotenv = self.project_root / ".env"
        if not dotenv.exists():
            return [CheckResult(".env", True, "absent; config.yaml values apply")]

        from dotenv import dotenv_values

        from src.core.config import ENV_OVERRIDES

        values = dotenv_values(dotenv)
        unknown = sorted(key for key in values if key.startswith("TREELAB_") and key not in ENV_OVERRIDES)
        if unknown:
            return [CheckResult(".env", False, f"unknown keys: {', '.join(unknown)}")]
        return [CheckResult(".env", True, f"{len(values)} value(s)")]

    def check_requirements(self) -> List[CheckResult]:
        path = self.project_root / "requirements.txt"
        if not path.exists():
            return [CheckResult("requirements.txt", False, "not found")]
        results = []
        for name in requirement_names(path.read_text()):
            try:
                results.append(CheckResult(f"package {name}", True, metadata.version(name)))
            except metadata.PackageNotFoundError:
                results.append(CheckResult(f"package {name}", False, "not installed"))
        return results

    def check_streams(self) -> List[CheckResult]:
        from src.core.runner import ReplicateRunner
        from src.core.streams import make_stream

        def draw(_, rng):
            return int(rng.integers(1 << 62))

        same_seed = make_stream(7).integers(1 << 62) == make_stream(7).integers(1 << 62)
        serial = ReplicateRunner(seed=7, replicates=4, threads=1).run(draw)
        threaded = ReplicateRunner(seed=7, replicates=4, threads=2).run(draw)
        return [
            CheckResult("seeded stream", bool(same_seed)),
            CheckResult("thread-independent replicates", serial == threaded),
        ]

    def check_output_dir(self) -> List[CheckResult]:
        out = self.project_root / "output"
        probe = out / ".write_test"
        try:
            out.mkdir(parents=True, exist_ok=True)
            probe.write_text("ok")
            probe.unlink()
        except OSError as e:
            return [CheckResult("output/", False, str(e))]
        return [CheckResult("output/", True, str(out))]

    def run(self) -> List[CheckResult]:
        results: List[CheckResult] = []
        for check in self.checks:
            logger.debug(f"Running {check.__name__}")
            try:
                found = check()
            except Exception as e:
                found = [CheckResult(check.__name__, False, f"{type(e).__name__}: {e}")]
            for result in found:
                if result.passed:
                    logger.info(f"PASS {result.name} {result.details}".rstrip())
                else:
                    logger.error(f"FAIL {result.name}: {result.details}")
            results.extend(found)
        return results


def summarize(results: List[CheckResult]) -> str:
    failed = [r for r in results if not r.passed]
    lines = [f"{len(results)} checks, {len(results) - len(failed)} passed, {len(failed)} failed"]
    if failed:
        lines.append("Failed:")
        lines.extend(f"  - {r.name}: {r.details}" for r in failed)
    else:
        lines.append("Setup is ready for experiments")
    return "\n".join(lines)


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Check the Tree Lab setup")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log every check as it runs")
    args = parser.parse_args(argv)

    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if args.verbose else "INFO", format="<level>{message}</level>")

    try:
        results = SetupVerifier().run()
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return 130
    print(summarize(results))
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
