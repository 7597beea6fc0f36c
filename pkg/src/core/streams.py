"""
Counter-based random streams.

Every random draw in the lab goes through a numpy Generator backed by the
Philox counter-based bit generator. Replicate r of an experiment always gets
the r-th child of the experiment's SeedSequence, so the outcome of a replicate
does not depend on how many threads ran the experiment.
"""

from typing import List

import numpy as np

MAX_SEED = 2**64 - 1


def make_stream(seed: int) -> np.random.Generator:
    """
    Build a single Philox stream from a 64-bit seed.

    Examples:
        >>> a, b = make_stream(7), make_stream(7)
        >>> a.integers(1 << 30) == b.integers(1 << 30)
        True
    """
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def spawn_streams(seed: int, count: int) -> List[np.random.Generator]:
    """
    Derive `count` independent streams from one seed.

    Args:
        seed: Experiment seed in [0, 2**64)
        count: Number of streams (usually the replicate count)

    Returns:
        List[np.random.Generator]: stream r for replicate r
    """
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def split_stream(rng: np.random.Generator, count: int) -> List[np.random.Generator]:
    """Derive `count` child streams from an existing generator."""
    return rng.spawn(count)


def named_stream(seed: int, purpose: int) -> np.random.Generator:
    """
    A stream for one-off draws of a command (a GWVE realization, a tree,
    label shuffles), disjoint from the replicate streams of the same seed.

    Args:
        seed: Experiment seed in [0, 2**64)
        purpose: Small positive tag naming the use
    """
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if purpose <= 0:
        raise ValueError(f"purpose must be positive, got {purpose}")
    entropy = [seed & 0xFFFFFFFF, seed >> 32, purpose]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
