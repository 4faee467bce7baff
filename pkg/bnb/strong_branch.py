"""Strong branching: pick the row or column whose weakest child bound is highest."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from rlt import AscentConfig, dual_ascent_rlt1
from .branching import child_fixed, cold_dual, reduced_problem
from .node import Incumbent, Node

logger = logging.getLogger(__name__)


class LineMode(str, Enum):
    ROW = "row"
    COLUMN = "column"


@dataclass
class BranchChoice:
    """Selected line plus the estimates of every candidate assignment.

    estimates[k, l] bounds the child fixing free facility k to free location l;
    prunable[k, l] marks children the incumbent already fathoms.
    """

    mode: LineMode
    index: int          # local index within the node's free facilities or locations
    score: float
    estimates: np.ndarray
    prunable: np.ndarray

    def candidates(self) -> list[tuple[int, int]]:
        """Local (facility, location) pairs on the selected line, prunable ones excluded."""
        m = self.estimates.shape[0]
        if self.mode is LineMode.ROW:
            pairs = [(self.index, l) for l in range(m)]
        else:
            pairs = [(k, self.index) for k in range(m)]
        return [(k, l) for k, l in pairs if not self.prunable[k, l]]


def candidate_estimates(inst, node: Node, incumbent: Incumbent, sb_iters: int,
                        cfg: AscentConfig) -> np.ndarray:
    """RLT1 bound of the cold child for every free (facility, location) pair."""
    m = node.free
    est = np.empty((m, m))
    ub = incumbent.bound
    sb_cfg = AscentConfig(K=cfg.K, max_iters=sb_iters, tau=cfg.tau,
                          lap_method=cfg.lap_method, integral=cfg.integral)
    for k in range(m):
        for l in range(m):
            fixed = child_fixed(node.fixed, node.free_fac[k], node.free_loc[l])
            problem = reduced_problem(inst, fixed)
            s = cold_dual(problem, level=1)
            # the ascent sees the child cost net of its constant
            if ub is not None and ub - problem.constant > 0:
                dual_ascent_rlt1(s, ub - problem.constant, sb_cfg)
            est[k, l] = problem.constant + s.lb
    return est


def strong_branch_select(inst, node: Node, incumbent: Incumbent, sb_iters: int,
                         cfg: AscentConfig | None = None) -> BranchChoice:
    """Max-min line selection over cheap child estimates.

    Row k scores min over l of estimates[k, l], column l scores min over k.
    Ties go to the lowest original index, rows before columns.
    """
    if node.free < 3:
        raise ValueError(f"strong branching needs >= 3 free facilities, got {node.free}")
    cfg = cfg or AscentConfig()
    est = candidate_estimates(inst, node, incumbent, sb_iters, cfg)
    prunable = np.vectorize(incumbent.prunes, otypes=[bool])(est)

    lines = [(-float(est[k].min()), node.free_fac[k], 0, k) for k in range(node.free)]
    lines += [(-float(est[:, l].min()), node.free_loc[l], 1, l) for l in range(node.free)]
    neg_score, _, kind, index = min(lines)
    choice = BranchChoice(LineMode.ROW if kind == 0 else LineMode.COLUMN, index,
                          -neg_score, est, prunable)
    logger.debug("node depth %d: branching on %s %d, score %.6g",
                 node.depth, choice.mode.value, index, choice.score)
    return choice


def branch_children(inst, node: Node, choice: BranchChoice, warm: bool, seq) -> list[Node]:
    """Children of a bounded node on the chosen line, prunable candidates excluded.

    Ordered so that pushing them onto a stack pops the lowest estimate first
    (lowest local index among equal estimates). seq yields node sequence numbers.
    """
    pairs = sorted(choice.candidates(),
                   key=lambda kl: (-choice.estimates[kl], -kl[0], -kl[1]))
    children = []
    for k, l in pairs:
        est = float(choice.estimates[k, l])
        if warm:
            children.append(Node.warm(node, k, l, est, next(seq)))
        else:
            fixed = child_fixed(node.fixed, node.free_fac[k], node.free_loc[l])
            children.append(Node.cold(inst.n, fixed, est, next(seq)))
    return children
