"""Brute-force assignment optimum for tests."""
from itertools import permutations

import numpy as np

MAX_ORACLE_SIZE = 10


def oracle_lap(M) -> float:
    """Minimum over all m! assignments; refuses m > 10."""
    M = np.asarray(M, dtype=np.float64)
    m = M.shape[0]
    if m > MAX_ORACLE_SIZE:
        raise ValueError(f"oracle_lap enumerates m! assignments; m={m} exceeds {MAX_ORACLE_SIZE}")
    if m == 1:
        return float(M[0, 0])
    # fix row 0, enumerate the rest in one array per choice
    best = np.inf
    rest_perms = np.array(list(permutations(range(m - 1))), dtype=np.intp)
    rows = np.arange(1, m)
    for first in range(m):
        cols = np.array([c for c in range(m) if c != first], dtype=np.intp)
        totals = M[rows, cols[rest_perms]].sum(axis=1)
        best = min(best, M[0, first] + float(totals.min()))
    return float(best)
