import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import gausscomp as gc


@pytest.fixture(scope="session")
def x_plus():
    return gc.fixture("x_plus")


@pytest.fixture(scope="session")
def x_minus():
    return gc.fixture("x_minus")


@pytest.fixture(scope="session")
def one_vector_set():
    """A single unit vector in R^5."""
    v = np.array([1.0, 2.0, -1.0, 0.5, 3.0])
    return gc.build_set((v / np.linalg.norm(v)).reshape(-1, 1))


def fuzzed_sets(count=20, seed=1234):
    """Deterministic random sets with l <= 8, n = m <= 6."""
    rng = np.random.default_rng(seed)
    sets = []
    for _ in range(count):
        n = int(rng.integers(2, 7))
        l = int(rng.integers(1, 9))
        sets.append(gc.build_set(rng.normal(size=(n, l)) * rng.uniform(0.3, 2.0)))
    return sets


def normalized(vset):
    return gc.build_set(vset.vectors / vset.norms)
