"""Forward auction with epsilon scaling (minimization form), vectorized over a batch.

Rows are bidders, columns are objects. All unassigned rows of a matrix bid in
the same round; the highest bid per column wins, lowest row index on ties.
The auction only supplies the assignment: exact duals are rebuilt from it
by a shortest-path potential pass, which also proves optimality.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from config import AUCTION_SCALE, NONNEG_TOL
from .certificate import LapBatch, LapCertificate, finish_batch, validate_costs
from .hungarian import _hungarian_duals

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpsSchedule:
    """eps starts at max(M)/start_div, shrinks by `factor` per phase, stops below granularity/(m+1)."""

    start_div: float = 2.0
    factor: float = 4.0
    max_rounds: int = 1_000_000


def _scale(M: np.ndarray) -> tuple[np.ndarray, float]:
    """Scale to integers when every entry is a multiple of 1/AUCTION_SCALE."""
    S = M * AUCTION_SCALE
    if np.array_equal(S, np.round(S)) and S.max(initial=0.0) < 2.0 ** 52:
        return S, 1.0
    # Non-dyadic data: eps-optimality only; optimality is settled by the repair pass
    return M, 1e-9 * max(1.0, float(M.max(initial=0.0)))


def _phase(C: np.ndarray, price: np.ndarray, eps: float, max_rounds: int) -> np.ndarray:
    """One auction phase from an empty assignment; returns row -> column."""
    b, m, _ = C.shape
    owner = np.full((b, m), -1, dtype=np.intp)
    assigned = np.full((b, m), -1, dtype=np.intp)
    for _ in range(max_rounds):
        bidding = assigned < 0
        live = np.flatnonzero(bidding.any(axis=1))
        if not live.size:
            return assigned
        k = live.size
        cost = C[live] + price[live][:, None, :]
        best_col = np.argmin(cost, axis=2)
        kk, rr = np.meshgrid(np.arange(k), np.arange(m), indexing="ij")
        best = cost[kk, rr, best_col]
        if m > 1:
            cost[kk, rr, best_col] = np.inf
            second = cost.min(axis=2)
        else:
            second = best
        bid = price[live][kk, best_col] + (second - best) + eps

        bids = np.full((k, m, m), -np.inf)
        mask = bidding[live]
        bids[kk[mask], rr[mask], best_col[mask]] = bid[mask]
        winner = np.argmax(bids, axis=1)
        top = bids.max(axis=1)
        ka, sa = np.nonzero(top > -np.inf)
        bi = live[ka]
        prev = owner[bi, sa]
        lost = prev >= 0
        assigned[bi[lost], prev[lost]] = -1
        w = winner[ka, sa]
        owner[bi, sa] = w
        assigned[bi, w] = sa
        price[bi, sa] = top[ka, sa]
    raise RuntimeError("auction phase exceeded its round limit")


def repair_duals(M: np.ndarray, assign: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact duals for a given assignment by Bellman-Ford on column potentials.

    Returns (u, v, ok); ok[k] is False when matrix k's assignment is not optimal
    (a negative cycle exists).
    """
    b, m, _ = M.shape
    rows = np.arange(m)
    bi = np.arange(b)[:, None]
    on = M[bi, rows[None, :], assign]
    W = M - on[:, :, None]                     # edge assign[r] -> s
    tol = 1e-12 * np.maximum(1.0, M.max(axis=(1, 2)))
    dist = np.zeros((b, m))
    ok = np.zeros(b, dtype=bool)
    for _ in range(m + 1):
        cand = (dist[bi, assign][:, :, None] + W).min(axis=1)
        improved = (cand < dist - tol[:, None]).any(axis=1)
        dist = np.minimum(dist, cand)
        if not improved.any():
            ok[:] = True
            break
        ok = ~improved
    v = dist
    u = on - v[bi, assign]
    return u, v, ok


def auction_batch(M, eps_schedule: EpsSchedule | None = None, tau: float = NONNEG_TOL) -> LapBatch:
    """Solve every matrix of a (b, m, m) stack by epsilon-scaled auction."""
    M = validate_costs(M)
    sched = eps_schedule or EpsSchedule()
    b, m, _ = M.shape
    C, granularity = _scale(M)
    price = np.zeros((b, m))
    assign = np.tile(np.arange(m), (b, 1))
    top = float(C.max(initial=0.0))
    if top > 0 and m > 1:
        eps = top / sched.start_div
        floor = granularity / (m + 1)
        while True:
            eps = max(eps, floor / sched.factor)
            assign = _phase(C, price, eps, sched.max_rounds)
            if eps < floor:
                break
            eps /= sched.factor
    u, v, ok = repair_duals(M, assign)
    if not ok.all():
        bad = np.flatnonzero(~ok)
        logger.warning("auction left %d of %d assignments suboptimal; re-solving them", bad.size, b)
        assign[bad], u[bad], v[bad] = _hungarian_duals(M[bad])
    return finish_batch(M, assign, u, v, tau)


def lap_auction(M, eps_schedule: EpsSchedule | None = None) -> LapCertificate:
    """Exact optimum of one square cost matrix by auction, with a repaired certificate."""
    return auction_batch(np.asarray(M, dtype=np.float64)[None], eps_schedule)[0]
