"""
Two-sample statistics between discrete and limit samples.

Distance matrices of k points are compared as vectors of their C(k, 2)
upper-triangle entries, in label order.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from scipy.integrate import cumulative_trapezoid
from scipy.spatial.distance import cdist, pdist, squareform
from scipy.stats import ks_2samp

from ..core.exceptions import OutputError
from ..core.models import AtomCloud, CurvePoint, EmpiricalMeasure1D


@dataclass(frozen=True)
class MatrixEnsemble:
    """
    Independent k x k distance matrices.

    Attributes:
        samples: Array of shape (N, k, k)
        scale: Normalization already applied to the distances (e.g. 1/n)
    """

    samples: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        s = self.samples
        if s.ndim != 3 or s.shape[1] != s.shape[2]:
            raise ValueError(f"samples must have shape (N, k, k), got {s.shape}")
        if s.size:
            if not np.allclose(s, np.transpose(s, (0, 2, 1))):
                raise ValueError("distance matrices must be symmetric")
            if np.any(np.diagonal(s, axis1=1, axis2=2) != 0):
                raise ValueError("distance matrices must have a zero diagonal")
            if np.any(s < 0):
                raise ValueError("distances must be non-negative")

    @classmethod
    def from_matrices(cls, matrices: Sequence[np.ndarray], k: int, scale: float = 1.0) -> "MatrixEnsemble":
        if not matrices:
            return cls(samples=np.zeros((0, k, k)), scale=scale)
        return cls(samples=np.stack([np.asarray(m, dtype=float) for m in matrices]), scale=scale)

    @property
    def k(self) -> int:
        return self.samples.shape[1]

    def __len__(self) -> int:
        return self.samples.shape[0]

    def vectors(self) -> np.ndarray:
        q, r = np.triu_indices(self.k, 1)
        return self.samples[:, q, r]


def save_ensemble(ensemble: MatrixEnsemble, path: Union[str, Path]) -> Path:
    """Write samples as .npy; the scale is carried by the caller's metadata."""
    path = Path(path)
    try:
        with open(path, "wb") as f:
            np.save(f, ensemble.samples, allow_pickle=False)
    except OSError as e:
        raise OutputError(f"Cannot write ensemble file {path}: {e}") from e
    return path


def load_ensemble(path: Union[str, Path], scale: float = 1.0) -> MatrixEnsemble:
    path = Path(path)
    try:
        samples = np.load(path, allow_pickle=False)
    except (OSError, ValueError) as e:
        raise OutputError(f"Cannot read ensemble file {path}: {e}") from e
    return MatrixEnsemble(samples=np.asarray(samples, dtype=float), scale=scale)


def _energy(D: np.ndarray, in_a: np.ndarray) -> float:
    a = in_a.astype(float)
    b = 1.0 - a
    n_a, n_b = a.sum(), b.sum()
    between = a @ D @ b / (n_a * n_b)
    within_a = a @ D @ a / (n_a * n_a)
    within_b = b @ D @ b / (n_b * n_b)
    return float(max(2.0 * between - within_a - within_b, 0.0))


def energy_distance(
    A: MatrixEnsemble, B: MatrixEnsemble, permutations: int, rng: np.random.Generator
) -> Tuple[float, float]:
    """
    Two-sample energy statistic with a permutation p-value.

    Args:
        A, B: Ensembles of the same k
        permutations: Number of label shuffles
        rng: Random stream for the shuffles

    Returns:
        (statistic, p_value) with p = (1 + #{shuffled >= observed}) / (1 + permutations)

    Raises:
        ValueError: On different k or an empty ensemble
    """
    if A.k != B.k:
        raise ValueError(f"ensembles have different k: {A.k} and {B.k}")
    if len(A) == 0 or len(B) == 0:
        raise ValueError("energy_distance needs nonempty ensembles")
    pooled = np.vstack([A.vectors(), B.vectors()])
    if pooled.shape[1] == 0:
        return 0.0, 1.0
    D = squareform(pdist(pooled))
    in_a = np.zeros(len(pooled), dtype=bool)
    in_a[: len(A)] = True
    observed = _energy(D, in_a)
    exceed = sum(_energy(D, rng.permutation(in_a)) >= observed for _ in range(permutations))
    p_value = (1 + exceed) / (1 + permutations)
    logger.debug(f"energy distance {observed:.5g}, p={p_value:.4f} ({permutations} shuffles)")
    return observed, p_value


def ks_1d(a: Sequence[float], b: Sequence[float]) -> Tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov statistic with its asymptotic p-value."""
    if len(a) == 0 or len(b) == 0:
        raise ValueError("ks_1d needs two nonempty samples")
    result = ks_2samp(np.asarray(a, dtype=float), np.asarray(b, dtype=float), method="asymp")
    return float(result.statistic), float(result.pvalue)


CdfLike = Union[EmpiricalMeasure1D, Callable[[np.ndarray], np.ndarray]]


def cdf_from_density(
    density: Callable[[np.ndarray], np.ndarray], normalize: bool = False, resolution: int = 20001
) -> Callable[[np.ndarray], np.ndarray]:
    """Cumulative mass t -> integral_0^t density, by the trapezoid rule on a fine grid."""
    fine = np.linspace(0.0, 1.0, resolution)
    mass = cumulative_trapezoid(np.asarray(density(fine), dtype=float), fine, initial=0.0)
    if normalize:
        mass = mass / mass[-1]
    return lambda t: np.interp(np.asarray(t, dtype=float), fine, mass)


def weak_convergence_gap(
    measures: Sequence[Tuple[int, EmpiricalMeasure1D]],
    target: CdfLike,
    grid: Sequence[float],
) -> List[Tuple[int, float]]:
    """
    sup over the grid of |F_n - F| for each (n, measure).

    Args:
        measures: (n, measure) pairs
        target: A measure or a cumulative mass function on [0, 1]
        grid: Points of (0, 1) avoiding atoms of the target
    """
    grid = np.asarray(grid, dtype=float)
    F = target.cdf(grid) if isinstance(target, EmpiricalMeasure1D) else np.asarray(target(grid), dtype=float)
    return [(n, float(np.max(np.abs(measure.cdf(grid) - F)))) for n, measure in measures]


def atom_cloud_gap(cloud: AtomCloud, theta_atoms: Sequence[Tuple[float, Sequence[float]]]) -> float:
    """
    Hausdorff distance in the (t, ratio) plane between the cloud and the
    points (t, theta_j(t)); 0 when both are empty, inf when one is.
    """
    targets = [(t, w) for t, weights in theta_atoms for w in weights if w > 0]
    if not cloud.points and not targets:
        return 0.0
    if not cloud.points or not targets:
        return float("inf")
    pairwise = cdist(np.array(cloud.points), np.array(targets))
    return float(max(pairwise.min(axis=1).max(), pairwise.min(axis=0).max()))


def weak_leaf_tightness(ensemble: MatrixEnsemble, delta: float) -> CurvePoint:
    """
    P(d(V_{k+1}, {V_1..V_k}) > 3 delta) from matrices of k + 1 points.

    The returned point is indexed by k (one less than the matrix size).
    """
    if ensemble.k < 2:
        raise ValueError("weak_leaf_tightness needs matrices of at least two points")
    if len(ensemble) == 0:
        raise ValueError("weak_leaf_tightness needs a nonempty ensemble")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    nearest = ensemble.samples[:, -1, :-1].min(axis=1)
    p = float(np.mean(nearest > 3.0 * delta))
    return CurvePoint(k=ensemble.k - 1, estimate=p, stderr=float(np.sqrt(p * (1 - p) / len(ensemble))))


def pair_distances(ensemble: MatrixEnsemble, q: int = 0, r: int = 1) -> np.ndarray:
    """d(V_{q+1}, V_{r+1}) across the ensemble."""
    return ensemble.samples[:, q, r]
