"""Exhaustive QAP oracle for small instances."""
from __future__ import annotations

from itertools import permutations

import numpy as np

from instances import Permutation, QapInstance

ORACLE_MAX_N = 8


def oracle_qap(inst: QapInstance) -> tuple[int, Permutation]:
    """Exact optimum over all n! permutations; ties go to the lexicographically first."""
    n = inst.n
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle_qap enumerates n! permutations; n={n} exceeds {ORACLE_MAX_N}")
    P = np.array(list(permutations(range(n))), dtype=np.intp)
    costs = (inst.flow[None, :, :] * inst.dist[P[:, :, None], P[:, None, :]]).sum(axis=(1, 2))
    best = int(np.argmin(costs))
    return int(costs[best]), tuple(int(x) for x in P[best])
