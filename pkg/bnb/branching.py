"""Child construction: cold reduced problems and warm folds of a parent dual."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from instances import QapInstance
from rlt import DualState, init_dual_from_costs
from rlt.indexing import c_flat, d_flat, skip_table

Fixed = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ReducedProblem:
    """The instance restricted to free facilities and locations.

    For a completion q of the free part, the cost of the full permutation is
    constant + sum_k linear[k, q_k] + sum_{k != m} flow[k, m] * dist[q_k, q_m].
    """

    flow: np.ndarray
    dist: np.ndarray
    linear: np.ndarray
    constant: int
    free_fac: tuple[int, ...]
    free_loc: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.free_fac)


def free_indices(n: int, fixed: Sequence[tuple[int, int]]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    facs = {i for i, _ in fixed}
    locs = {j for _, j in fixed}
    if len(facs) != len(fixed) or len(locs) != len(fixed):
        raise ValueError(f"fixed pairs are not mutually feasible: {list(fixed)}")
    return (tuple(i for i in range(n) if i not in facs),
            tuple(j for j in range(n) if j not in locs))


def reduced_problem(inst: QapInstance, fixed: Sequence[tuple[int, int]]) -> ReducedProblem:
    """Restrict inst to the indices not in `fixed`, folding fixed interactions into linear costs."""
    ff, fl = free_indices(inst.n, fixed)
    F, D = inst.flow, inst.dist
    ff_ = np.array(ff, dtype=np.intp)
    fl_ = np.array(fl, dtype=np.intp)
    A = np.array([i for i, _ in fixed], dtype=np.intp)
    Bv = np.array([j for _, j in fixed], dtype=np.intp)

    linear = np.outer(np.diagonal(F)[ff_], np.diagonal(D)[fl_])
    constant = 0
    if len(fixed):
        linear = linear + F[np.ix_(A, ff_)].T @ D[np.ix_(Bv, fl_)]
        linear = linear + F[np.ix_(ff_, A)] @ D[np.ix_(fl_, Bv)].T
        constant = int((F[np.ix_(A, A)] * D[np.ix_(Bv, Bv)]).sum())
    return ReducedProblem(F[np.ix_(ff_, ff_)], D[np.ix_(fl_, fl_)], linear, constant, ff, fl)


def cold_dual(problem: ReducedProblem, level: int) -> DualState:
    """Fresh dual state over a reduced problem; level 2 needs at least 3 free indices."""
    if problem.size < 3:
        level = 1
    return init_dual_from_costs(problem.flow, problem.dist, problem.linear, level)


def fold_assignment(s: DualState, a: int, b: int) -> tuple[DualState, float]:
    """Fix local facility a to local location b in s.

    Returns the child state (lb 0, size n-1) and the offset b_ab + s.lb, so that
    for every completion child.evaluate(q) + offset == s.evaluate(full).
    """
    n = s.n
    m = n - 1
    if m < 2:
        raise ValueError(f"cannot fold a state of size {n}")
    ks = skip_table(n)[a]            # parent index of child facility k'
    ls = skip_table(n)[b]
    cskip = skip_table(m)

    K = ks[:, None, None, None]
    L = ls[None, :, None, None]
    M = ks[cskip][:, None, :, None]  # third facility, indexed by (k', r')
    Q = ls[cskip][None, :, None, :]

    Cf = s.C.reshape(-1)
    K2, L2 = ks[:, None], ls[None, :]
    B = s.B[K2, L2] + Cf[c_flat(n, a, b, K2, L2)] + Cf[c_flat(n, K2, L2, a, b)]
    C = Cf[c_flat(n, K, L, M, Q)]

    D = None
    if s.D is not None:
        Df = s.D.reshape(-1)
        C = C + Df[d_flat(n, a, b, K, L, M, Q)] \
              + Df[d_flat(n, a, b, M, Q, K, L)] \
              + Df[d_flat(n, K, L, M, Q, a, b)]
        if m >= 3:
            D = _restrict_d(s.D, n, a, b, ks, ls)
    child = DualState(m, 0.0, np.ascontiguousarray(B), np.ascontiguousarray(C), D)
    return child, float(s.B[a, b]) + s.lb


def _restrict_d(D: np.ndarray, n: int, a: int, b: int, ks: np.ndarray, ls: np.ndarray) -> np.ndarray:
    """Stored D blocks of pairs and locations avoiding a and b, without row a and column b."""
    m = n - 1
    pi, pk = np.triu_indices(m, 1)
    i, k = ks[pi], ks[pk]
    P = (i * n - i * (i + 1) // 2 + (k - i - 1))[:, None, None, None, None]

    j = ls[:, None]                                  # (m, 1)
    l = ls[skip_table(m)]                            # (m, m-1)
    J = j[None, :, :, None, None]
    T = (l - (l > j))[None, :, :, None, None]

    inner = skip_table(n - 2)
    rpos = a - (a > i) - (a > k)
    R = inner[rpos][:, None, None, :, None]          # (pairs, 1, 1, n-3, 1)
    cpos = b - (b > j) - (b > l)
    S = inner[cpos][None, :, :, None, :]             # (1, m, m-1, 1, n-3)
    return np.ascontiguousarray(D[P, J, T, R, S])


def child_fixed(fixed: Fixed, facility: int, location: int) -> Fixed:
    return fixed + ((facility, location),)
