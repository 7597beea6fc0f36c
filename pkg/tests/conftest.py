"""
Pytest configuration and shared fixtures for Tree Lab tests.

This module provides:
- Named schedules (four-level, path, Kingman, two-path star)
- A hand-built realization of the four-level schedule
- Seeded random streams
- Limit parameters of the uniform constant-rate regime
"""

import numpy as np
import pytest

from src.coalescent.params import LimitParams
from src.core.streams import make_stream
from src.schedule.builders import four_level_schedule, kingman_schedule, path_schedule, star_of_paths_schedule
from src.tree.tree import Tree


@pytest.fixture
def rng() -> np.random.Generator:
    """A fresh seeded stream per test."""
    return make_stream(7)


@pytest.fixture
def four_level():
    """D = (4, 5, 3, 2, 0): 15 vertices, 60 trees."""
    return four_level_schedule()


@pytest.fixture
def fixed_tree(four_level) -> Tree:
    """A hand-built realization of the four-level schedule."""
    parents = [
        np.zeros(0, dtype=np.int64),
        np.array([0, 0, 0, 0]),
        np.array([0, 1, 0, 2, 0]),
        np.array([1, 0, 0]),
        np.array([0, 0]),
    ]
    return Tree(four_level, parents)


@pytest.fixture
def path10():
    """The path of height 10."""
    return path_schedule(10)


@pytest.fixture
def kingman_small():
    """Kingman rows with 6 vertices per height over 40 heights."""
    return kingman_schedule(40, 6)


@pytest.fixture
def kingman_desk():
    """The desk-scale Kingman schedule: n = 420, D_i = 21."""
    return kingman_schedule(420, 21)


@pytest.fixture
def two_paths():
    """A root with two disjoint paths of height 8."""
    return star_of_paths_schedule(8, arms=2)


@pytest.fixture
def uniform_rate2() -> LimitParams:
    """nu = Unif[0, 1], rho density 2, no atoms."""
    return LimitParams.uniform_constant_rate(2.0)
