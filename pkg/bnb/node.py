"""Search-tree nodes and the shared incumbent."""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field

from instances import Permutation, QapInstance, check_capacity, evaluate
from rlt import DualState, exceeds
from .branching import Fixed, cold_dual, fold_assignment, free_indices, reduced_problem

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class Node:
    """A partial assignment awaiting bounding or branching.

    lower_bound is base_lb + dual.lb once a dual is attached, and never less
    than the estimate inherited from strong branching or a checkpoint.
    """

    fixed: Fixed
    free_fac: tuple[int, ...]
    free_loc: tuple[int, ...]
    base_lb: float = 0.0
    dual: DualState | None = None
    estimate: float = 0.0
    seq: int = 0
    # (parent state, local facility, local location, parent base_lb) for a pending warm fold
    warm_source: tuple | None = field(default=None, repr=False)
    bounded: bool = False

    @property
    def depth(self) -> int:
        return len(self.fixed)

    @property
    def free(self) -> int:
        return len(self.free_fac)

    @property
    def lower_bound(self) -> float:
        own = self.base_lb + self.dual.lb if self.dual is not None else self.estimate
        return max(own, self.estimate)

    @classmethod
    def cold(cls, n: int, fixed: Fixed, estimate: float = 0.0, seq: int = 0) -> "Node":
        ff, fl = free_indices(n, fixed)
        return cls(tuple(fixed), ff, fl, estimate=estimate, seq=seq)

    @classmethod
    def warm(cls, parent: "Node", a: int, b: int, estimate: float, seq: int) -> "Node":
        """Child of a bounded level-2 parent that fixes local facility a to local location b."""
        fixed = parent.fixed + ((parent.free_fac[a], parent.free_loc[b]),)
        ff = parent.free_fac[:a] + parent.free_fac[a + 1:]
        fl = parent.free_loc[:b] + parent.free_loc[b + 1:]
        return cls(fixed, ff, fl, estimate=estimate, seq=seq,
                   warm_source=(parent.dual, a, b, parent.base_lb))

    def ensure_dual(self, inst: QapInstance, level: int, mem_cap: int | None = None) -> DualState:
        """Attach the node's dual: fold the parent's state if warm, else build a cold one."""
        if self.dual is not None:
            return self.dual
        if self.warm_source is not None:
            parent, a, b, parent_base = self.warm_source
            self.dual, offset = fold_assignment(parent, a, b)
            self.base_lb = parent_base + offset
            self.warm_source = None
        else:
            problem = reduced_problem(inst, self.fixed)
            if problem.size >= 3:
                check_capacity(problem.size, mem_cap, level)
            self.dual = cold_dual(problem, level)
            self.base_lb = float(problem.constant)
        return self.dual

    def absorb_lb(self) -> None:
        """Move the dual's lb into base_lb (the dual keeps only reduced costs)."""
        self.base_lb += self.dual.lb
        self.dual.lb = 0.0

    def release(self) -> None:
        self.dual = None
        self.warm_source = None

    def completion(self, q) -> Permutation:
        """Full permutation from a completion q (free facility k' -> free location q[k'])."""
        perm = [0] * (self.depth + self.free)
        for i, j in self.fixed:
            perm[i] = j
        for k, l in enumerate(q):
            perm[self.free_fac[k]] = self.free_loc[l]
        return tuple(perm)


class Incumbent:
    """Best known solution; updates are evaluate-verified and monotone.

    A value supplied without a permutation (an external upper bound) prunes
    only nodes that cannot contain a solution of at most that value.
    """

    def __init__(self, inst: QapInstance, perm: Permutation | None = None,
                 value: int | None = None, integral: bool = True):
        self.inst = inst
        self.integral = integral
        self._lock = threading.Lock()
        self.perm: Permutation | None = None
        self.value: int | None = None
        self.known_value = value
        self.improvements = 0
        if perm is not None:
            self.offer(perm)

    @property
    def bound(self) -> float | None:
        """The value nodes are pruned against; None while nothing is known."""
        bounds = [self.value] if self.perm is not None else []
        if self.known_value is not None:
            bounds.append(self.known_value + 1)
        return min(bounds) if bounds else None

    def prunes(self, lb: float) -> bool:
        ub = self.bound
        return ub is not None and exceeds(lb, ub, self.integral)

    def offer(self, perm: Permutation) -> bool:
        """Adopt perm if it beats the current incumbent. Returns True on improvement."""
        value = evaluate(self.inst, perm)
        with self._lock:
            if self.value is not None and value >= self.value:
                return False
            self.perm = tuple(perm)
            self.value = value
            self.improvements += 1
        logger.info("%s: new incumbent %d", self.inst.name, value)
        return True
