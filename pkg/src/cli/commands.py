"""
Subcommand implementations.

Each command resolves and validates every input first; only then is the
output directory created and written. Files written per command:

- sample-tree: tree.csv or tree.bin, tree.svg with --render
- render: tree.svg
- matrix: discrete_matrices.npy, discrete_matrices.json
- limit-matrix: limit_matrices.npy, limit_matrices.json
- compare: compare_report.json
- check: check_report.json, profile_measure.csv, merge_measure.csv
- gwve: gwve_path.csv, gwve_drift.csv, gwve_schedule.json, gwve_params.json,
  gwve_summary.json
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from ..coalescent.limit import limit_distance_matrix, sample_coalescent
from ..coalescent.params import LimitParams, load_params, save_params
from ..compare.report import (
    Diagnostic,
    convergence_report,
    gap_diagnostic,
    p_value_diagnostic,
    schedule_diagnostics,
    write_report,
)
from ..compare.statistics import (
    MatrixEnsemble,
    energy_distance,
    ks_1d,
    load_ensemble,
    pair_distances,
    save_ensemble,
    weak_convergence_gap,
    weak_leaf_tightness,
)
from ..core.config import ExperimentConfig
from ..core.exceptions import ConfigError, OutputError, ScheduleValidationError
from ..core.runner import ReplicateRunner
from ..core.streams import named_stream
from ..gwve.drift import check_A3, drift_stats, plugin_beta_tilde, write_drift_csv
from ..gwve.environment import Environment, environment_from_spec, load_environment
from ..gwve.extraction import extract_limit_params
from ..gwve.process import RescaledPath, gwve_tightness_frequency, sample_gwve, write_path_csv
from ..schedule.builders import (
    DegreeMix,
    four_level_schedule,
    from_profile,
    kingman_schedule,
    named_profile,
    path_schedule,
    star_of_paths_schedule,
    star_schedule,
)
from ..schedule.io import load_schedule, save_schedule, write_measure_csv
from ..schedule.measures import merge_measure, profile_measure
from ..schedule.schedule import DegreeSchedule, validate
from ..tree.export import write_tree_binary, write_tree_csv
from ..tree.render import render_svg
from ..tree.tree import Tree, distance_matrix_arrays, sample_tree, sample_vertex_arrays

# Stream tags for command-level draws
GWVE_STREAM = 1
TREE_STREAM = 2
SHUFFLE_STREAM = 3

PROFILE_GRID = tuple(np.linspace(0.05, 0.95, 19))


def resolve_environment(config: ExperimentConfig) -> Environment:
    """The environment section: {"file": path} or an inline environment spec."""
    if config.environment is None:
        raise ConfigError("This command needs an environment section")
    if set(config.environment) == {"file"}:
        return load_environment(config.environment["file"])
    return environment_from_spec(dict(config.environment))


def _gwve_realization(config: ExperimentConfig, env: Environment) -> Tuple[RescaledPath, DegreeSchedule]:
    return sample_gwve(env, named_stream(config.seed, GWVE_STREAM))


def resolve_schedule(config: ExperimentConfig) -> DegreeSchedule:
    """
    Build the configured schedule and validate it.

    Raises:
        ConfigError: If no schedule source is configured
        ScheduleValidationError: If the schedule violates an invariant
    """
    source = config.schedule
    if source is None:
        raise ConfigError("This command needs a schedule section")

    if source.file is not None:
        schedule = load_schedule(source.file)
    elif source.family is not None:
        family = source.family
        if family.name == "path":
            schedule = path_schedule(family.n)
        elif family.name == "four_level":
            schedule = four_level_schedule()
        elif family.name == "kingman":
            schedule = kingman_schedule(family.n, family.m, family.giant_heights, family.giant_fraction)
        elif family.name == "star":
            schedule = star_schedule(family.sizes)
        else:
            schedule = star_of_paths_schedule(family.n, family.arms)
    elif source.profile is not None:
        profile = source.profile
        try:
            fn = named_profile(profile.name)
            mix = DegreeMix.named(profile.mix)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        schedule = from_profile(fn, profile.n, mix, profile.scale)
    else:
        _, schedule = _gwve_realization(config, resolve_environment(config))

    report = validate(schedule)
    if not report.is_valid:
        raise ScheduleValidationError(
            f"Invalid schedule: {'; '.join(report.messages())}", report
        )
    logger.info(f"Schedule ready: n={schedule.n}, h={schedule.h}, {schedule.total_vertices} vertices")
    return schedule


def resolve_limit_params(config: ExperimentConfig) -> LimitParams:
    """
    Build the configured limit parameters (nu, rho, Theta).

    Raises:
        ConfigError: If no limit source is configured
        ExtinctionError: If an extracted GWVE realization died out
    """
    source = config.limit
    if source is None:
        raise ConfigError("This command needs a limit section")
    if source.file is not None:
        return load_params(source.file)
    if source.preset is not None:
        return LimitParams.uniform_constant_rate(source.preset.rate)

    env = resolve_environment(config)
    path, _ = _gwve_realization(config, env)
    return extract_limit_params(
        path,
        plugin_beta_tilde(drift_stats(env)),
        config.diagnostics.jump_threshold,
        config.diagnostics.theta_convention,
    )


def prepare_output(config: ExperimentConfig) -> Path:
    out = Path(config.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(f"Cannot create output directory {out}: {e}") from e
    return out


def _write_json(data: Dict[str, Any], path: Path) -> Path:
    try:
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    except OSError as e:
        raise OutputError(f"Cannot write {path}: {e}") from e
    return path


def _write_tree(config: ExperimentConfig, tree: Tree, out: Path) -> Path:
    if config.tree_format == "binary":
        return write_tree_binary(tree, out / "tree.bin")
    return write_tree_csv(tree, out / "tree.csv")


def cmd_sample_tree(config: ExperimentConfig) -> List[Path]:
    schedule = resolve_schedule(config)
    tree = sample_tree(schedule, named_stream(config.seed, TREE_STREAM))
    out = prepare_output(config)
    written = [_write_tree(config, tree, out)]
    if config.render:
        written.append(render_svg(tree, out / "tree.svg"))
    logger.info(f"Sampled tree with {tree.vertex_count} vertices")
    return written


def cmd_render(config: ExperimentConfig) -> List[Path]:
    schedule = resolve_schedule(config)
    tree = sample_tree(schedule, named_stream(config.seed, TREE_STREAM))
    out = prepare_output(config)
    return [render_svg(tree, out / "tree.svg")]


def _save_ensemble_with_meta(
    ensemble: MatrixEnsemble, out: Path, stem: str, config: ExperimentConfig, extra: Dict[str, Any]
) -> List[Path]:
    meta = {"k": ensemble.k, "replicates": len(ensemble), "scale": ensemble.scale, "seed": config.seed, **extra}
    return [save_ensemble(ensemble, out / f"{stem}.npy"), _write_json(meta, out / f"{stem}.json")]


def cmd_matrix(config: ExperimentConfig) -> List[Path]:
    """k uniform vertices per sampled tree, distances scaled by 1/n."""
    schedule = resolve_schedule(config)
    k, n = config.k, schedule.n

    def replicate(_: int, rng: np.random.Generator) -> np.ndarray:
        tree = sample_tree(schedule, rng)
        heights, positions = sample_vertex_arrays(tree, k, rng)
        return distance_matrix_arrays(tree, heights, positions) / n

    runner = ReplicateRunner(config.seed, config.replicates, config.threads)
    matrices = runner.run(replicate, label="discrete matrix")
    ensemble = MatrixEnsemble.from_matrices(matrices, k, scale=1.0 / n)
    out = prepare_output(config)
    return _save_ensemble_with_meta(ensemble, out, "discrete_matrices", config, {"n": n})


def cmd_limit_matrix(config: ExperimentConfig) -> List[Path]:
    params = resolve_limit_params(config)
    k = config.k

    def replicate(_: int, rng: np.random.Generator) -> np.ndarray:
        if k == 0:
            return np.zeros((0, 0))
        return limit_distance_matrix(sample_coalescent(params, k, rng))

    runner = ReplicateRunner(config.seed, config.replicates, config.threads)
    matrices = runner.run(replicate, label="limit matrix")
    ensemble = MatrixEnsemble.from_matrices(matrices, k)
    out = prepare_output(config)
    return _save_ensemble_with_meta(ensemble, out, "limit_matrices", config, {})


def _compare_input(configured: Optional[Path], fallback: Path) -> MatrixEnsemble:
    path = Path(configured) if configured is not None else fallback
    if not path.exists():
        raise ConfigError(f"Compare input not found: {path}")
    ensemble = load_ensemble(path)
    if len(ensemble) == 0 or ensemble.k == 0:
        raise ConfigError(f"Compare input {path} holds no distances (shape {ensemble.samples.shape})")
    return ensemble


def cmd_compare(config: ExperimentConfig) -> List[Path]:
    """
    Energy test on whole matrices, KS test and mean gap on d(V_1, V_2),
    and the weak leaf-tightness gap when the matrices hold at least 3 points.
    """
    out_dir = Path(config.output_dir)
    discrete = _compare_input(config.compare.discrete, out_dir / "discrete_matrices.npy")
    limit = _compare_input(config.compare.limit, out_dir / "limit_matrices.npy")
    if discrete.k != limit.k:
        raise ConfigError(f"Compare inputs have different k: {discrete.k} and {limit.k}")

    thresholds = config.thresholds
    statistic, p_value = energy_distance(
        discrete, limit, config.compare.permutations, named_stream(config.seed, SHUFFLE_STREAM)
    )
    diagnostics: List[Diagnostic] = [
        p_value_diagnostic("energy_distance", p_value, thresholds, detail=f"statistic {statistic:.6g}")
    ]
    if discrete.k >= 2:
        a, b = pair_distances(discrete), pair_distances(limit)
        ks_stat, ks_p = ks_1d(a, b)
        diagnostics.append(p_value_diagnostic("pair_distance_ks", ks_p, thresholds, detail=f"D = {ks_stat:.6g}"))
        diagnostics.append(
            gap_diagnostic(
                "pair_distance_mean",
                abs(float(a.mean()) - float(b.mean())),
                thresholds.gap_warn,
                detail=f"discrete {a.mean():.6g} vs limit {b.mean():.6g}",
            )
        )
    if discrete.k >= 3:
        delta = config.diagnostics.delta
        left, right = weak_leaf_tightness(discrete, delta), weak_leaf_tightness(limit, delta)
        diagnostics.append(
            gap_diagnostic(
                "weak_leaf_tightness",
                abs(left.estimate - right.estimate),
                thresholds.gap_warn,
                detail=f"delta {delta}: discrete {left.estimate:.4g} vs limit {right.estimate:.4g}",
            )
        )

    report = convergence_report(diagnostics)
    out = prepare_output(config)
    return [write_report(report, out / "compare_report.json")]


def cmd_check(config: ExperimentConfig) -> List[Path]:
    """Hypothesis diagnostics of the schedule, against the limit parameters when configured."""
    schedule = resolve_schedule(config)
    target = resolve_limit_params(config) if config.limit is not None else None
    spec = config.diagnostics

    diagnostics = schedule_diagnostics(
        schedule,
        config.thresholds,
        spec.alpha,
        spec.beta,
        spec.k_grid,
        spec.eps,
        spec.ratio_threshold,
        target=target,
    )
    profile = profile_measure(schedule)
    if target is not None:
        [(_, gap)] = weak_convergence_gap([(schedule.n, profile)], target.nu.cdf, PROFILE_GRID)
        diagnostics.append(gap_diagnostic("profile_gap", gap, config.thresholds.gap_warn))
    small, _ = merge_measure(schedule, spec.ratio_threshold)

    report = convergence_report(diagnostics)
    out = prepare_output(config)
    return [
        write_report(report, out / "check_report.json"),
        write_measure_csv(profile, out / "profile_measure.csv"),
        write_measure_csv(small, out / "merge_measure.csv"),
    ]


def cmd_gwve(config: ExperimentConfig) -> List[Path]:
    """
    One GWVE realization with its schedule, the drift statistics of the
    environment, the (A3) value, the tightness frequency over replicates and,
    when the realization survives, the extracted limit parameters.
    """
    env = resolve_environment(config)
    spec = config.diagnostics
    path, schedule = _gwve_realization(config, env)
    stats = drift_stats(env)
    params: Optional[LimitParams] = None
    if path.survived:
        params = extract_limit_params(path, plugin_beta_tilde(stats), spec.jump_threshold, spec.theta_convention)
    else:
        logger.warning(f"GWVE realization died out at generation {path.extinction_generation}")

    frequency = gwve_tightness_frequency(
        env, named_stream(config.seed, TREE_STREAM), config.replicates, spec.alpha, spec.beta, spec.k_grid
    )
    summary = {
        "n": env.n,
        "ell": env.ell,
        "survived": path.survived,
        "extinction_generation": path.extinction_generation,
        "a3": check_A3(env, spec.a3_constant),
        "a3_constant": spec.a3_constant,
        "truncation_mass": env.truncation_mass,
        "tightness": {**frequency.model_dump(), "frequency": frequency.frequency},
    }

    out = prepare_output(config)
    written = [
        write_path_csv(path, out / "gwve_path.csv"),
        write_drift_csv(stats, out / "gwve_drift.csv"),
        save_schedule(schedule, out / "gwve_schedule.json"),
    ]
    if params is not None:
        written.append(save_params(params, out / "gwve_params.json"))
    written.append(_write_json(summary, out / "gwve_summary.json"))
    return written


COMMANDS = {
    "sample-tree": cmd_sample_tree,
    "matrix": cmd_matrix,
    "limit-matrix": cmd_limit_matrix,
    "compare": cmd_compare,
    "check": cmd_check,
    "gwve": cmd_gwve,
    "render": cmd_render,
}
