"""
Limit parameters (nu, rho, Theta) read off a rescaled path.

On the generation grid t_i = gamma^{-1}(i / n) the path is the step function
X = Z_i / ell on [t_i, t_{i+1}):
- nu(dt) = X(t) dt / integral of X
- rho(dt) = 2 beta_tilde(dt) / X(t), one density per cell
- theta_1(t) = (Delta X(t) / X(t))^2 at every generation whose relative
  growth exceeds the jump threshold
"""

from typing import Callable, List, Literal, Tuple

import numpy as np
from loguru import logger
from scipy.integrate import cumulative_trapezoid

from ..coalescent.params import LimitParams, NuSpec, RhoSpec
from ..core.exceptions import ExtinctionError
from .process import RescaledPath

Convention = Literal["post", "pre"]


def detect_jumps(path: RescaledPath, jump_threshold: float) -> List[int]:
    """Generations i in 1..n-1 with (Z_i - Z_{i-1}) / Z_{i-1} > jump_threshold."""
    if jump_threshold <= 0:
        raise ValueError(f"jump_threshold must be positive, got {jump_threshold}")
    Z = path.Z.astype(float)
    growth = np.diff(Z) / np.where(Z[:-1] > 0, Z[:-1], np.inf)
    return [i for i in range(1, path.env.n) if growth[i - 1] > jump_threshold]


def _nu_from_path(times: np.ndarray, X: np.ndarray) -> NuSpec:
    # duplicated breakpoints make the trapezoid rule exact on a step function
    nodes = np.repeat(times, 2)[1:-1]
    heights = np.repeat(X, 2)
    area = cumulative_trapezoid(heights, nodes, initial=0.0)
    F = np.append(area[::2], area[-1])
    F = F / F[-1]
    F[-1] = 1.0
    return NuSpec(cdf_grid=tuple(zip(times.tolist(), F.tolist())))


def _rho_from_path(
    times: np.ndarray, X: np.ndarray, tilde: np.ndarray, jumps: List[int]
) -> RhoSpec:
    widths = np.diff(times)
    density = 2.0 * np.diff(tilde) / widths / X
    for i in jumps:
        cell = i - 1
        neighbours = [density[c] for c in (cell - 1, cell + 1) if 0 <= c < len(density) and c + 1 not in jumps]
        density[cell] = float(np.mean(neighbours)) if neighbours else 0.0
    if np.any(density < 0):
        logger.warning(f"rho density negative on {int(np.sum(density < 0))} cell(s); clipped to 0")
        density = np.clip(density, 0.0, None)

    cells: List[Tuple[float, float, float]] = []
    for t0, t1, value in zip(times[:-1], times[1:], density):
        if cells and cells[-1][2] == value:
            cells[-1] = (cells[-1][0], float(t1), cells[-1][2])
        else:
            cells.append((float(t0), float(t1), float(value)))
    return RhoSpec(grid=tuple(cells))


def extract_limit_params(
    path: RescaledPath,
    beta_tilde_fn: Callable[[np.ndarray], np.ndarray],
    jump_threshold: float,
    convention: Convention = "post",
) -> LimitParams:
    """
    Build (nu, rho, Theta) from one path.

    Args:
        path: Rescaled path, positive up to generation n
        beta_tilde_fn: beta tilde as a function of t
        jump_threshold: Relative growth above which a generation is a jump
        convention: Divide the jump by the post-jump ("post") or pre-jump
            ("pre") value of X

    Returns:
        LimitParams: nu, rho on the generation cells and one theta_1 per jump

    Raises:
        ExtinctionError: If Z hits 0 at or before generation n
    """
    if not path.survived or np.any(path.Z <= 0):
        raise ExtinctionError(
            f"conditioning event fails: path dies at generation {path.extinction_generation}"
        )
    env = path.env
    times = env.generation_times()
    X = path.Z[:-1].astype(float) / env.ell
    jumps = detect_jumps(path, jump_threshold)

    nu = _nu_from_path(times, X)
    tilde = np.asarray(beta_tilde_fn(times), dtype=float)
    rho = _rho_from_path(times, X, tilde, jumps)

    theta = []
    for i in jumps:
        before, after = float(path.Z[i - 1]), float(path.Z[i])
        reference = after if convention == "post" else before
        theta_1 = ((after - before) / reference) ** 2
        if theta_1 > 1.0:
            logger.warning(f"theta_1 = {theta_1:.3g} at t={times[i]:.4f} exceeds 1; clipped")
            theta_1 = 1.0
        theta.append((float(times[i]), (theta_1,)))
    logger.info(f"Extracted limit params: {len(rho.grid)} rho cell(s), {len(theta)} atom(s)")
    return LimitParams(nu=nu, rho=rho, theta=tuple(theta))
