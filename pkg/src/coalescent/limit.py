"""
Continuous growth-coalescent driven by (nu, rho, Theta).

Going down from time 1 to time 0:
- label r is born at H_r ~ nu with block {r};
- each label pair (q, r) carries a Poisson process of intensity rho; at one
  of its points the blocks of q and r merge into q if both are nonempty;
- at an atom t of Theta every label draws Theta_{t,r} = j with probability
  theta_j(t); for each j >= 1 the nonempty blocks of the labels that drew j
  merge into the smallest of those labels;
- at time 0 every remaining block merges into label 1.

An atom acts on the blocks alive just above its time, so a label born exactly
at an atom time does not take part in it.

Randomness is drawn label by label (births, per-pair points, per-atom labels)
so that the trace of the first k labels can be replayed from a larger draw.
"""

from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..core.models import CurvePoint
from .params import LimitParams

_ATOM, _BIRTH, _SMALL = 0, 1, 2


@dataclass(frozen=True)
class CoalescentRandomness:
    """
    Labelled randomness of one run.

    Attributes:
        births: H_r per label
        point_times, point_q, point_r: Poisson points of every pair q < r
            (0-based labels)
        atom_times: Theta atom times
        atom_labels: atom_labels[a, r] is Theta_{t_a, r} (0 means no merge)
    """

    births: np.ndarray
    point_times: np.ndarray
    point_q: np.ndarray
    point_r: np.ndarray
    atom_times: np.ndarray
    atom_labels: np.ndarray

    @property
    def k(self) -> int:
        return len(self.births)


class LimitEvent(BaseModel):
    """A merge of the continuous coalescent; blocks are the unions formed."""

    model_config = {"frozen": True}

    time: float = Field(ge=0.0, le=1.0)
    kind: Literal["small", "large", "final"]
    blocks: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class LimitTrace:
    """
    Outcome of one run.

    Attributes:
        k: Number of labels
        births: H_1..H_k
        events: Merges by decreasing time
        merge_times: c(q, r); c(q, q) = H_q
    """

    k: int
    births: np.ndarray
    events: Tuple[LimitEvent, ...]
    merge_times: np.ndarray


def draw_randomness(
    params: LimitParams,
    k: int,
    rng: np.random.Generator,
    births: Optional[Sequence[float]] = None,
) -> CoalescentRandomness:
    """
    Draw births, per-pair Poisson points and atom labels for k labels.

    Args:
        params: Coalescent parameters
        k: Number of labels (>= 1)
        rng: Random stream
        births: Fixed birth times instead of draws from nu
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if births is None:
        H = params.nu.sample(rng, k)
    else:
        H = np.asarray(births, dtype=float)
        if H.shape != (k,) or np.any((H < 0) | (H > 1)):
            raise ValueError(f"births must be {k} values in [0, 1]")

    q_index, r_index = np.triu_indices(k, 1)
    pairs = len(q_index)
    times, qs, rs = [], [], []
    for t0, t1, density in params.rho.grid:
        counts = rng.poisson(density * (t1 - t0), size=pairs)
        total = int(counts.sum())
        if total == 0:
            continue
        owners = np.repeat(np.arange(pairs), counts)
        times.append(rng.uniform(t0, t1, size=total))
        qs.append(q_index[owners])
        rs.append(r_index[owners])

    labels = np.zeros((len(params.theta), k), dtype=np.int64)
    for a, (_, weights) in enumerate(params.theta):
        probabilities = np.concatenate([[max(0.0, 1.0 - sum(weights))], weights])
        probabilities = probabilities / probabilities.sum()
        labels[a] = rng.choice(len(probabilities), size=k, p=probabilities)

    def join(parts, dtype):
        return np.concatenate(parts).astype(dtype) if parts else np.zeros(0, dtype=dtype)

    return CoalescentRandomness(
        births=H,
        point_times=join(times, float),
        point_q=join(qs, np.int64),
        point_r=join(rs, np.int64),
        atom_times=params.atom_times,
        atom_labels=labels,
    )


def restrict(randomness: CoalescentRandomness, k: int) -> CoalescentRandomness:
    """The randomness of labels 1..k only."""
    if not 1 <= k <= randomness.k:
        raise ValueError(f"k must lie in [1, {randomness.k}], got {k}")
    keep = (randomness.point_q < k) & (randomness.point_r < k)
    return CoalescentRandomness(
        births=randomness.births[:k],
        point_times=randomness.point_times[keep],
        point_q=randomness.point_q[keep],
        point_r=randomness.point_r[keep],
        atom_times=randomness.atom_times,
        atom_labels=randomness.atom_labels[:, :k],
    )


def _first_points(randomness: CoalescentRandomness) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Highest point of each pair below both births; later points never act."""
    H = randomness.births
    t, q, r = randomness.point_times, randomness.point_q, randomness.point_r
    below = t < np.minimum(H[q], H[r])
    t, q, r = t[below], q[below], r[below]
    if len(t) == 0:
        return t, q, r
    k = randomness.k
    pair = q * k + r
    order = np.lexsort((-t, pair))
    first = np.ones(len(order), dtype=bool)
    first[1:] = pair[order][1:] != pair[order][:-1]
    chosen = order[first]
    return t[chosen], q[chosen], r[chosen]


def replay(randomness: CoalescentRandomness, window: int = 256) -> LimitTrace:
    """
    Run the coalescent on given randomness.

    Candidates (atoms, births, the acting point of each pair) are scanned by
    decreasing time, atoms first on ties, then births. Pair points whose
    labels are not both nonempty are skipped in vectorized windows.
    """
    k = randomness.k
    H = randomness.births
    pt, pq, pr = _first_points(randomness)
    n_atoms = len(randomness.atom_times)

    times = np.concatenate([randomness.atom_times, H, pt])
    kinds = np.concatenate(
        [np.full(n_atoms, _ATOM), np.full(k, _BIRTH), np.full(len(pt), _SMALL)]
    )
    first = np.concatenate([np.arange(n_atoms), np.arange(k), pq]).astype(np.int64)
    second = np.concatenate([np.zeros(n_atoms + k, dtype=np.int64), pr])
    order = np.lexsort((kinds, -times))
    times, kinds, first, second = times[order], kinds[order], first[order], second[order]
    mask_q = np.where(kinds == _SMALL, first, 0)

    alive = np.zeros(k, dtype=bool)
    blocks: List[List[int]] = [[] for _ in range(k)]
    c = np.zeros((k, k), dtype=float)
    np.fill_diagonal(c, H)
    events: List[LimitEvent] = []

    def merge(into: int, others: List[int], t: float) -> Tuple[int, ...]:
        union = list(blocks[into])
        for other in others:
            c[np.ix_(union, blocks[other])] = t
            c[np.ix_(blocks[other], union)] = t
            union.extend(blocks[other])
            blocks[other] = []
            alive[other] = False
        blocks[into] = union
        return tuple(sorted(label + 1 for label in union))

    position, total = 0, len(times)
    while position < total:
        stop = min(position + window, total)
        relevant = (kinds[position:stop] != _SMALL) | (
            alive[mask_q[position:stop]] & alive[second[position:stop]]
        )
        hits = np.flatnonzero(relevant)
        if len(hits) == 0:
            position = stop
            continue
        index = position + int(hits[0])
        t, kind, a, b = float(times[index]), kinds[index], int(first[index]), int(second[index])

        if kind == _BIRTH:
            blocks[a] = [a]
            alive[a] = True
        elif kind == _SMALL:
            events.append(LimitEvent(time=t, kind="small", blocks=(merge(a, [b], t),)))
        else:
            row = randomness.atom_labels[a]
            formed = []
            for j in np.unique(row[row > 0]):
                group = [int(r) for r in np.flatnonzero((row == j) & alive)]
                if len(group) >= 2:
                    formed.append(merge(group[0], group[1:], t))
            if formed:
                events.append(LimitEvent(time=t, kind="large", blocks=tuple(formed)))
        position = index + 1

    survivors = [int(r) for r in np.flatnonzero(alive)]
    if len(survivors) >= 2:
        events.append(LimitEvent(time=0.0, kind="final", blocks=(merge(survivors[0], survivors[1:], 0.0),)))

    return LimitTrace(k=k, births=H.copy(), events=tuple(events), merge_times=c)


def sample_coalescent(params: LimitParams, k: int, rng: np.random.Generator) -> LimitTrace:
    """Draw labelled randomness for k labels and replay it."""
    return replay(draw_randomness(params, k, rng))


def limit_distance_matrix(trace: LimitTrace) -> np.ndarray:
    """d(q, r) = H_q + H_r - 2 c(q, r), zero diagonal."""
    H = trace.births
    d = H[:, None] + H[None, :] - 2.0 * trace.merge_times
    np.fill_diagonal(d, 0.0)
    return d


def leaf_tightness_stat_continuous(trace: LimitTrace, x: float) -> int:
    """N_k(x) = #{i : H_i > x and c(i, j) < x for every j != i}."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    c = trace.merge_times.copy()
    np.fill_diagonal(c, -np.inf)
    isolated = c.max(axis=1, initial=-np.inf) < x
    return int(np.sum((trace.births > x) & isolated))


def first_merge_waiting_time(trace: LimitTrace) -> float:
    """Time from the lowest birth down to the first merge below it."""
    lowest = float(trace.births.min())
    below = [e.time for e in trace.events if e.time < lowest]
    return lowest - (max(below) if below else 0.0)


def uniform_constant_rate_pair_distance(rate: float) -> float:
    """
    E[d(V_1, V_2)] for nu = Unif[0, 1], rho with constant density `rate`,
    no atoms.

    Given S = min(H_1, H_2) = s the merge time is s - E for E ~ Exp(rate)
    when E < s and 0 otherwise, so E[C | S = s] = s - (1 - exp(-rate s))/rate.
    S has density 2(1 - s).
    """
    if rate < 0:
        raise ValueError(f"rate must be non-negative, got {rate}")
    if rate == 0:
        return 1.0
    laplace = 2.0 / rate - 2.0 * (1.0 - np.exp(-rate)) / rate**2
    expected_merge = 1.0 / 3.0 - (1.0 - laplace) / rate
    return float(1.0 - 2.0 * expected_merge)


class TightGPReport(BaseModel):
    """Windows [a, b] on which rho has no mass."""

    model_config = {"frozen": True}

    passed: bool
    failing_windows: Tuple[Tuple[float, float], ...] = ()


def check_tight_gp(params: LimitParams, windows: Sequence[Tuple[float, float]]) -> TightGPReport:
    """
    Require rho([a, b]) > 0 on every window; finite Theta lists never have
    infinite total weight, so they cannot rescue an empty window.
    """
    failing = tuple((a, b) for a, b in windows if params.rho.mass(a, b) <= 0.0)
    return TightGPReport(passed=not failing, failing_windows=failing)


def limit_trace_to_jsonl(trace: LimitTrace) -> str:
    """One JSON object per event: time, kind and the blocks formed."""
    lines = [event.model_dump_json() for event in trace.events]
    return "\n".join(lines) + ("\n" if lines else "")


def continuous_leaf_tightness_curve(
    params: LimitParams,
    rng: np.random.Generator,
    k_grid: Sequence[int],
    x: float,
    replicates: int,
) -> List[CurvePoint]:
    """Mean of N_k(x) / k over independent runs, per k."""
    curve: List[CurvePoint] = []
    for k in k_grid:
        ratios = np.array(
            [leaf_tightness_stat_continuous(sample_coalescent(params, k, rng), x) / k for _ in range(replicates)]
        )
        stderr = float(ratios.std(ddof=1) / np.sqrt(replicates)) if replicates > 1 else 0.0
        curve.append(CurvePoint(k=k, estimate=float(ratios.mean()), stderr=stderr))
    return curve
