"""
Tests for the setup check script.

Each check runs against a temporary project root so that the real
checkout is never modified.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from verify_setup import CheckResult, SetupVerifier, main, requirement_names, summarize  # noqa: E402

VALID_CONFIG = """
seed: 7
replicates: 10
k: 3
schedule:
  family:
    name: four_level
"""


@pytest.fixture
def verifier(tmp_path):
    """A verifier rooted at an empty temporary directory."""
    return SetupVerifier(tmp_path)


class TestRequirementNames:
    """Parsing requirements files."""

    def test_names_without_specifiers(self):
        """Comments, blanks and version specifiers are stripped."""
        text = "# header\n\nnumpy>=1.25.0\npython-dotenv>=1.0.0  # env\npyyaml==6.0\n"

        assert requirement_names(text) == ["numpy", "python-dotenv", "pyyaml"]


class TestChecks:
    """Single checks on a temporary root."""

    def test_packages_import(self, verifier):
        """All eight src packages import."""
        results = verifier.check_packages()

        assert len(results) == 8
        assert all(r.passed for r in results)

    def test_package_import_failure(self, verifier, mocker):
        """Import errors become failed results."""
        mocker.patch("verify_setup.importlib.import_module", side_effect=ImportError("broken"))

        results = verifier.check_packages()

        assert not any(r.passed for r in results)
        assert "ImportError: broken" in results[0].details

    def test_missing_experiment_file(self, verifier):
        """config.yaml must exist."""
        [result] = verifier.check_experiment_file()

        assert not result.passed
        assert "not found" in result.details

    def test_valid_experiment_file(self, verifier, tmp_path):
        """A four_level experiment passes both checks."""
        (tmp_path / "config.yaml").write_text(VALID_CONFIG)

        results = verifier.check_experiment_file()

        assert [r.name for r in results] == ["config.yaml", "schedule source"]
        assert all(r.passed for r in results)

    def test_invalid_experiment_value(self, verifier, tmp_path):
        """A negative replicate count fails."""
        (tmp_path / "config.yaml").write_text(VALID_CONFIG.replace("replicates: 10", "replicates: -1"))

        [result] = verifier.check_experiment_file()

        assert not result.passed

    def test_experiment_without_schedule(self, verifier, tmp_path):
        """The schedule section is required for a usable checkout."""
        (tmp_path / "config.yaml").write_text("seed: 7\n")

        results = verifier.check_experiment_file()

        assert results[-1] == CheckResult("schedule source", False, "config.yaml has no schedule section")

    def test_overrides_optional(self, verifier, tmp_path):
        """No .env is fine once the template exists."""
        (tmp_path / ".env.example").write_text("TREELAB_LOG_LEVEL=INFO\n")

        assert verifier.check_overrides()[0].passed

    def test_overrides_unknown_key(self, verifier, tmp_path):
        """TREELAB_SEED is not an override."""
        (tmp_path / ".env.example").write_text("TREELAB_LOG_LEVEL=INFO\n")
        (tmp_path / ".env").write_text("TREELAB_SEED=3\n")

        [result] = verifier.check_overrides()

        assert not result.passed
        assert "TREELAB_SEED" in result.details

    def test_overrides_known_keys(self, verifier, tmp_path):
        """Known keys pass."""
        (tmp_path / ".env.example").write_text("TREELAB_LOG_LEVEL=INFO\n")
        (tmp_path / ".env").write_text("TREELAB_LOG_LEVEL=DEBUG\nTREELAB_THREADS=2\n")

        assert verifier.check_overrides() == [CheckResult(".env", True, "2 value(s)")]

    def test_requirements_installed(self, verifier, tmp_path):
        """Distribution names resolve without import-name mapping."""
        (tmp_path / "requirements.txt").write_text("numpy>=1.25.0\npython-dotenv>=1.0.0\npyyaml>=6.0\n")

        assert all(r.passed for r in verifier.check_requirements())

    def test_requirement_missing(self, verifier, tmp_path):
        """An uninstalled distribution fails."""
        (tmp_path / "requirements.txt").write_text("not-a-real-package-xyz>=1.0\n")

        assert verifier.check_requirements() == [CheckResult("package not-a-real-package-xyz", False, "not installed")]

    def test_streams(self, verifier):
        """Seeded streams reproduce and ignore the thread count."""
        assert all(r.passed for r in verifier.check_streams())

    def test_output_dir_created(self, verifier, tmp_path):
        """output/ is created and the write test file removed."""
        assert verifier.check_output_dir()[0].passed
        assert (tmp_path / "output").is_dir()
        assert not (tmp_path / "output" / ".write_test").exists()

    def test_output_dir_blocked(self, verifier, tmp_path):
        """A file where output/ should be fails the check."""
        (tmp_path / "output").write_text("not a directory")

        assert not verifier.check_output_dir()[0].passed


class TestRun:
    """Whole runs and summaries."""

    def test_crashing_check_is_a_failure(self, verifier, mocker):
        """An exception inside a check is reported, not raised."""
        crashing = mocker.Mock(side_effect=RuntimeError("boom"))
        crashing.__name__ = "check_boom"
        checks = mocker.patch.object(SetupVerifier, "checks", new_callable=mocker.PropertyMock)
        checks.return_value = [crashing]

        assert verifier.run() == [CheckResult("check_boom", False, "RuntimeError: boom")]

    def test_summary_all_pass(self):
        """Counts and the ready line."""
        text = summarize([CheckResult("a", True), CheckResult("b", True)])

        assert text.splitlines() == ["2 checks, 2 passed, 0 failed", "Setup is ready for experiments"]

    def test_summary_lists_failures(self):
        """Failed checks are listed with their details."""
        text = summarize([CheckResult("a", True), CheckResult("b", False, "missing")])

        assert "1 failed" in text
        assert "  - b: missing" in text

    def test_main_exit_code(self, mocker, capsys):
        """1 when any check fails."""
        mocker.patch.object(SetupVerifier, "run", return_value=[CheckResult("a", False, "x")])

        assert main([]) == 1
        assert "1 failed" in capsys.readouterr().out

    def test_main_interrupted(self, mocker):
        """130 on KeyboardInterrupt."""
        mocker.patch.object(SetupVerifier, "run", side_effect=KeyboardInterrupt)

        assert main(["--verbose"]) == 130
