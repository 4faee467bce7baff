"""2-swap steepest descent for the QAP."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from instances import Permutation, QapInstance, check_permutation


def two_swap_deltas(inst: QapInstance, perm: Sequence[int]) -> np.ndarray:
    """delta[r, s]: objective change from exchanging the locations of facilities r and s.

    Exact for asymmetric matrices with nonzero diagonals; the diagonal of the
    result is zero.
    """
    p = np.asarray(perm, dtype=np.intp)
    F = inst.flow
    Dp = inst.dist[np.ix_(p, p)]
    X = F @ Dp.T        # X[r, s] = sum_k F[r, k] Dp[s, k]
    Y = F.T @ Dp        # Y[r, s] = sum_i F[i, r] Dp[i, s]
    xd = np.diagonal(X)
    yd = np.diagonal(Y)
    G = X - xd[:, None] - xd[None, :] + X.T
    H = Y - yd[:, None] - yd[None, :] + Y.T

    fd = np.diagonal(F)
    dd = np.diagonal(Dp)
    Frr, Fss, Frs, Fsr = fd[:, None], fd[None, :], F, F.T
    Drr, Dss, Drs, Dsr = dd[:, None], dd[None, :], Dp, Dp.T
    # the k in {r, s} terms of G and the i in {r, s} terms of H belong to the 2x2 block
    G = G - (Frr - Fsr) * (Dsr - Drr) - (Frs - Fss) * (Dss - Drs)
    H = H - (Frr - Frs) * (Drs - Drr) - (Fsr - Fss) * (Dss - Dsr)
    block = (Frr - Fss) * (Dss - Drr) + (Frs - Fsr) * (Dsr - Drs)
    delta = G + H + block
    np.fill_diagonal(delta, 0)
    return delta


def local_search_2opt(inst: QapInstance, start: Sequence[int]) -> Permutation:
    """Apply the best improving swap until none lowers the objective.

    Ties go to the lowest (r, s) in row-major order.
    """
    p = np.array(check_permutation(start, inst.n), dtype=np.intp)
    upper = np.triu(np.ones((inst.n, inst.n), dtype=bool), 1)
    while True:
        delta = np.where(upper, two_swap_deltas(inst, p), 0)
        r, s = np.unravel_index(np.argmin(delta), delta.shape)
        if delta[r, s] >= 0:
            return tuple(int(x) for x in p)
        p[r], p[s] = p[s], p[r]
