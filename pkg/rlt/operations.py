"""Cost spreading, complement transfers and cost concentration on a DualState.

Every operation preserves the logical cost of every permutation and keeps
all stored entries nonnegative.
"""
from __future__ import annotations

import numpy as np

from config import LAP_CHUNK_ENTRIES, NONNEG_TOL
from lap import HUNGARIAN, lap_solve_batch
from .indexing import pair_table, triple_chunks
from .state import DualState


def _concentrate(blocks: np.ndarray, method: str, tau: float) -> np.ndarray:
    """Replace each (m, m) block by its LAP residuals in place; return the optima."""
    values = np.empty(blocks.shape[0])
    chunk = max(1, LAP_CHUNK_ENTRIES // blocks[0].size) if blocks.shape[0] else 1
    for start in range(0, blocks.shape[0], chunk):
        stop = min(start + chunk, blocks.shape[0])
        res = lap_solve_batch(blocks[start:stop], method, tau)
        blocks[start:stop] = res.R
        values[start:stop] = res.value
    return values


def spread_b_to_c(s: DualState) -> None:
    """b_ij / (n-1) onto every entry of C_ij, then B = 0."""
    s.C += (s.B / (s.n - 1))[:, :, None, None]
    s.B[...] = 0.0


def spread_c_to_d(s: DualState) -> None:
    """(c_ijkl + c_klij) / (2(n-2)) onto every stored entry of D_ijkl, then C = 0."""
    n = s.n
    t = pair_table(n)
    Cf = s.C.reshape(-1)
    inc = (Cf[t.fwd] + Cf[t.bwd]) / (2.0 * (n - 2))
    s.D += inc.reshape(s.D.shape[:3])[..., None, None]
    s.C[...] = 0.0


def transfer_complements_c(s: DualState) -> None:
    """Set both members of every pair c_ijkl, c_klij to their mean."""
    t = pair_table(s.n)
    Cf = s.C.reshape(-1)
    mean = 0.5 * (Cf[t.fwd] + Cf[t.bwd])
    Cf[t.fwd] = mean
    Cf[t.bwd] = mean


def transfer_complements_d(s: DualState) -> None:
    """Set the three stored representatives of every D class to their mean."""
    Df = s.D.reshape(-1)
    for t in triple_chunks(s.n):
        mean = (Df[t.first] + Df[t.second] + Df[t.third]) / 3.0
        Df[t.first] = mean
        Df[t.second] = mean
        Df[t.third] = mean


def concentrate_d_to_c(s: DualState, method: str = HUNGARIAN, tau: float = NONNEG_TOL) -> None:
    """LAP on each stored D block; residuals stay, the optimum goes to c_ijkl and c_klij."""
    n = s.n
    t = pair_table(n)
    blocks = s.D.reshape(-1, n - 2, n - 2)
    values = _concentrate(blocks, method, tau)
    Cf = s.C.reshape(-1)
    Cf[t.fwd] += values
    Cf[t.bwd] += values


def concentrate_c_to_b(s: DualState, method: str = HUNGARIAN, tau: float = NONNEG_TOL) -> None:
    """LAP on each C_ij; residuals stay, b_ij += optimum."""
    n = s.n
    blocks = s.C.reshape(n * n, n - 1, n - 1)
    s.B += _concentrate(blocks, method, tau).reshape(n, n)


def concentrate_b_to_lb(s: DualState, method: str = HUNGARIAN, tau: float = NONNEG_TOL) -> float:
    """LAP on B; residuals stay, lb += optimum. Returns the optimum (LB')."""
    gain = float(_concentrate(s.B[None], method, tau)[0])
    s.lb += gain
    return gain
