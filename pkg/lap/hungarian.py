"""Shortest augmenting path Hungarian method, vectorized over a batch of matrices.

Every matrix in the stack runs the same row-by-row schedule; matrices whose
augmenting path is already found simply drop out of the inner loop.
"""
from __future__ import annotations

import numpy as np

from config import NONNEG_TOL
from .certificate import LapBatch, LapCertificate, finish_batch, validate_costs


def _hungarian_duals(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (assign, u, v) for a (b, m, m) stack with u[r] + v[s] <= M[r, s]."""
    b, m, _ = M.shape
    u = np.zeros((b, m + 1))
    v = np.zeros((b, m + 1))
    p = np.zeros((b, m + 1), dtype=np.intp)    # p[:, j]: 1-based row matched to column j
    way = np.zeros((b, m + 1), dtype=np.intp)
    for i in range(1, m + 1):
        p[:, 0] = i
        j0 = np.zeros(b, dtype=np.intp)
        minv = np.full((b, m + 1), np.inf)
        used = np.zeros((b, m + 1), dtype=bool)
        act = np.arange(b)
        while act.size:
            k = act.size
            jj = j0[act]
            used[act, jj] = True
            i0 = p[act, jj]
            cur = M[act, i0 - 1, :] - u[act, i0][:, None] - v[act, 1:]
            free = ~used[act, 1:]
            mv = minv[act, 1:]
            better = free & (cur < mv)
            mv = np.where(better, cur, mv)
            minv[act, 1:] = mv
            way[act, 1:] = np.where(better, jj[:, None], way[act, 1:])
            cand = np.where(free, mv, np.inf)
            j1 = np.argmin(cand, axis=1)
            delta = cand[np.arange(k), j1]
            j1 += 1

            us = used[act]
            d = np.broadcast_to(delta[:, None], us.shape)
            rows = np.broadcast_to(act[:, None], us.shape)
            np.add.at(u, (rows[us], p[act][us]), d[us])
            v[act] -= np.where(us, d, 0.0)
            minv[act] -= np.where(us, 0.0, d)

            j0[act] = j1
            act = act[p[act, j1] != 0]
        # flip the augmenting path
        act = np.arange(b)
        while act.size:
            jj = j0[act]
            j1 = way[act, jj]
            p[act, jj] = p[act, j1]
            j0[act] = j1
            act = act[j1 != 0]

    assign = np.empty((b, m), dtype=np.intp)
    assign[np.arange(b)[:, None], p[:, 1:] - 1] = np.arange(m)[None, :]
    return assign, u[:, 1:], v[:, 1:]


def hungarian_batch(M, tau: float = NONNEG_TOL) -> LapBatch:
    """Solve every matrix of a (b, m, m) stack; M must be nonnegative and finite."""
    M = validate_costs(M)
    assign, u, v = _hungarian_duals(M)
    return finish_batch(M, assign, u, v, tau)


def lap_hungarian(M) -> LapCertificate:
    """Exact optimum of one square cost matrix with a dual certificate."""
    return hungarian_batch(np.asarray(M, dtype=np.float64)[None])[0]
