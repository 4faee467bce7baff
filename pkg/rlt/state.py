"""Reduced-cost tensors of the RLT dual and their logical evaluation."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from instances import QapInstance, check_capacity
from .indexing import c_flat, d_flat, eval_table, skip_table

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class DualState:
    """lb plus nonnegative reduced costs B, C and (level 2 only) half-stored D.

    For every permutation p, lb + sum_i b + sum_{i!=k} c + sum over ordered
    facility triples of logical d equals the cost of p.
    """

    n: int
    lb: float
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray | None = None

    @property
    def level(self) -> int:
        return 2 if self.D is not None else 1

    @property
    def nbytes(self) -> int:
        return self.B.nbytes + self.C.nbytes + (self.D.nbytes if self.D is not None else 0)

    def copy(self) -> "DualState":
        return DualState(self.n, self.lb, self.B.copy(), self.C.copy(),
                         None if self.D is None else self.D.copy())

    def evaluate(self, perms) -> float | np.ndarray:
        """Logical cost of one permutation (1-D) or of each row of a 2-D array."""
        P = np.asarray(perms, dtype=np.int64)
        single = P.ndim == 1
        P = np.atleast_2d(P)
        n = self.n
        t = eval_table(n)
        total = np.full(P.shape[0], self.lb, dtype=np.float64)
        total += self.B[np.arange(n)[None, :], P].sum(axis=1)
        if n >= 2:
            idx = c_flat(n, t.ci[None, :], P[:, t.ci], t.ck[None, :], P[:, t.ck])
            total += self.C.reshape(-1)[idx].sum(axis=1)
        if self.D is not None and n >= 3:
            idx = d_flat(n, t.di[None, :], P[:, t.di], t.dk[None, :], P[:, t.dk],
                         t.dm[None, :], P[:, t.dm])
            # each stored entry stands for two logical entries
            total += 2.0 * self.D.reshape(-1)[idx].sum(axis=1)
        return float(total[0]) if single else total

    def min_entry(self) -> float:
        vals = [self.B.min(), self.C.min() if self.C.size else 0.0]
        if self.D is not None and self.D.size:
            vals.append(self.D.min())
        return float(min(vals))


def d_shape(n: int) -> tuple[int, ...]:
    return (n * (n - 1) // 2, n, n - 1, n - 2, n - 2)


def init_dual_from_costs(flow: np.ndarray, dist: np.ndarray, linear: np.ndarray, level: int = 2) -> DualState:
    """Fresh state: B = linear costs, c_{ij,kl} = f_ik * d_jl, D = 0.

    Diagonals of flow and dist are ignored; linear carries them.
    """
    n = flow.shape[0]
    if level == 2 and n < 3:
        raise ValueError(f"an RLT2 state needs n >= 3, got {n}")
    if n < 2:
        raise ValueError(f"a dual state needs n >= 2, got {n}")
    skip = skip_table(n)
    rows = np.arange(n)[:, None]
    fa = np.asarray(flow, dtype=np.float64)[rows, skip]     # fa[i, r] = f_{i, k_r}
    da = np.asarray(dist, dtype=np.float64)[rows, skip]     # da[j, s] = d_{j, l_s}
    C = np.ascontiguousarray(fa[:, None, :, None] * da[None, :, None, :])
    B = np.array(linear, dtype=np.float64)
    D = np.zeros(d_shape(n)) if level == 2 else None
    return DualState(n, 0.0, B, C, D)


def init_dual(inst: QapInstance, level: int = 2, mem_cap: int | None = None) -> DualState:
    """State for a full instance: b_ij = f_ii * d_jj; refuses sizes beyond mem_cap."""
    estimate = check_capacity(inst.n, mem_cap, level)
    if estimate is not None:
        logger.debug("%s: RLT%d state ~%d bytes", inst.name, level, estimate.bytes_for_level(level))
    linear = np.outer(np.diagonal(inst.flow), np.diagonal(inst.dist))
    return init_dual_from_costs(inst.flow, inst.dist, linear, level)
