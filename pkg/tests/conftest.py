import os
import sys
from itertools import permutations

import numpy as np
import pytest

# Allow running from repo root
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from instances import QapInstance, load_fixture  # noqa: E402

SAMPLEDATA_DIR = os.path.join(ROOT, "sampledata")


def random_instance(seed: int, n: int, high: int = 50, name: str = "") -> QapInstance:
    """Asymmetric integer instance with nonzero diagonals, entries in [0, high]."""
    rng = np.random.default_rng(seed)
    flow = rng.integers(0, high + 1, size=(n, n))
    dist = rng.integers(0, high + 1, size=(n, n))
    return QapInstance(name or f"rand{n}_{seed}", flow, dist)


def zero_instance(n: int) -> QapInstance:
    return QapInstance(f"zero{n}", np.zeros((n, n), dtype=np.int64), np.zeros((n, n), dtype=np.int64))


def all_perms(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.int64)


def fixture_paths(name: str) -> tuple[str, str]:
    """.dat/.sln paths for a QAPLIB instance; skips the test when the .dat is absent."""
    dat = os.path.join(SAMPLEDATA_DIR, name + ".dat")
    sln = os.path.join(SAMPLEDATA_DIR, name + ".sln")
    if not os.path.exists(dat) or not os.path.exists(sln):
        pytest.skip(f"QAPLIB fixture {name} not present in sampledata/")
    return dat, sln


@pytest.fixture
def qaplib():
    """Load a QAPLIB fixture by name: (instance, value, permutation, orientation)."""
    return lambda name: load_fixture(*fixture_paths(name))
