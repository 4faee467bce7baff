"""Dual ascent loops: full RLT2 and the D-free RLT1 variant."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from config import DEFAULT_K, DEFAULT_MAX_ITERS, NONNEG_TOL, PRUNE_EPS
from lap import AUCTION, HUNGARIAN
from .operations import (
    concentrate_b_to_lb,
    concentrate_c_to_b,
    concentrate_d_to_c,
    spread_b_to_c,
    spread_c_to_d,
    transfer_complements_c,
    transfer_complements_d,
)
from .state import DualState

logger = logging.getLogger(__name__)


class AscentStatus(str, Enum):
    CONVERGED = "converged"
    PRUNED = "pruned"
    ITER_CAPPED = "iter_capped"


@dataclass(frozen=True)
class AscentConfig:
    """K: stop once an iteration gains less than K * ub."""

    K: float = DEFAULT_K
    max_iters: int = DEFAULT_MAX_ITERS
    tau: float = NONNEG_TOL
    lap_method: str = HUNGARIAN
    integral: bool = True

    def __post_init__(self):
        if not 1e-7 <= self.K <= 1:
            raise ValueError(f"K must lie in [1e-7, 1], got {self.K}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.lap_method not in (HUNGARIAN, AUCTION):
            raise ValueError(f"unknown LAP method {self.lap_method!r}")


@dataclass
class AscentResult:
    lb: float
    iterations: int
    status: AscentStatus
    gains: list[float] = field(default_factory=list)


def exceeds(lb: float, ub: float, integral: bool = True) -> bool:
    """True when lb proves no solution better than ub (integral costs: lb > ub - 1)."""
    return lb > ub - 1 + PRUNE_EPS if integral else lb >= ub


def _ascend(s: DualState, ub: float, cfg: AscentConfig, body) -> AscentResult:
    if ub <= 0:
        raise ValueError(f"dual ascent needs ub > 0, got {ub}")
    gains = []
    it = 0
    while True:
        it += 1
        body()
        gain = concentrate_b_to_lb(s, cfg.lap_method, cfg.tau)
        gains.append(gain)
        logger.debug("ascent iter %d: gain %.6g, lb %.6g", it, gain, s.lb)
        if exceeds(s.lb, ub, cfg.integral):
            status = AscentStatus.PRUNED
        elif gain / ub < cfg.K:
            status = AscentStatus.CONVERGED
        elif it >= cfg.max_iters:
            status = AscentStatus.ITER_CAPPED
        else:
            continue
        return AscentResult(s.lb, it, status, gains)


def dual_ascent_rlt2(s: DualState, ub: float, cfg: AscentConfig | None = None) -> AscentResult:
    """Spread B->C->D, balance D, concentrate D->C, balance C, concentrate C->B->lb; repeat."""
    if s.D is None:
        raise ValueError("RLT2 ascent needs a level-2 state")
    cfg = cfg or AscentConfig()

    def body():
        spread_b_to_c(s)
        spread_c_to_d(s)
        transfer_complements_d(s)
        concentrate_d_to_c(s, cfg.lap_method, cfg.tau)
        transfer_complements_c(s)
        concentrate_c_to_b(s, cfg.lap_method, cfg.tau)

    return _ascend(s, ub, cfg, body)


def dual_ascent_rlt1(s: DualState, ub: float, cfg: AscentConfig | None = None) -> AscentResult:
    """Same loop without D: spread B->C, balance C, concentrate C->B->lb."""
    cfg = cfg or AscentConfig()

    def body():
        spread_b_to_c(s)
        transfer_complements_c(s)
        concentrate_c_to_b(s, cfg.lap_method, cfg.tau)

    return _ascend(s, ub, cfg, body)


def dual_ascent(s: DualState, ub: float, cfg: AscentConfig | None = None) -> AscentResult:
    """RLT2 ascent for level-2 states, RLT1 otherwise."""
    return dual_ascent_rlt2(s, ub, cfg) if s.level == 2 else dual_ascent_rlt1(s, ub, cfg)
