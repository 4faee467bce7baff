"""Parallel depth-first branch-and-bound over RLT dual bounds."""
from __future__ import annotations

import logging
import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from itertools import count, permutations

from config import (
    DEFAULT_K,
    DEFAULT_MAX_ITERS,
    DEFAULT_SB_ITERS,
    DEFAULT_WARM_DEPTH,
    QAP_CHECKPOINT_INTERVAL,
)
from heuristic import HeuristicConfig, heuristic_ub
from instances import Permutation, QapInstance, instance_digest
from lap import HUNGARIAN
from rlt import AscentConfig, dual_ascent, init_dual
from .checkpoint import CheckpointState, OpenNode, write_checkpoint
from .node import Incumbent, Node
from .report import SolveReport, SolveStatus
from .strong_branch import branch_children, strong_branch_select

logger = logging.getLogger(__name__)

# processed nodes between lb/ub trajectory samples
TRAJECTORY_EVERY = 100


@dataclass(frozen=True)
class SolverConfig:
    workers: int = 1
    K: float = DEFAULT_K
    max_iters: int = DEFAULT_MAX_ITERS
    sb_iters: int = DEFAULT_SB_ITERS
    warm_depth: int = DEFAULT_WARM_DEPTH
    lap_method: str = HUNGARIAN
    ub: int | None = None
    initial_perm: Permutation | None = None
    restarts: int = 50
    seed: int = 0
    time_cap: float | None = None
    node_limit: int | None = None
    mem_cap: int | None = None
    checkpoint_path: str | None = None
    checkpoint_interval: float = QAP_CHECKPOINT_INTERVAL

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.sb_iters < 1:
            raise ValueError(f"sb_iters must be >= 1, got {self.sb_iters}")
        if self.warm_depth < 0:
            raise ValueError(f"warm_depth must be >= 0, got {self.warm_depth}")
        self.ascent_config()

    def ascent_config(self) -> AscentConfig:
        return AscentConfig(K=self.K, max_iters=self.max_iters, lap_method=self.lap_method)

    def echo(self) -> dict:
        d = asdict(self)
        if d["initial_perm"] is not None:
            d["initial_perm"] = [j + 1 for j in d["initial_perm"]]
        return d


def make_root(inst: QapInstance, incumbent: Incumbent, cfg: SolverConfig) -> Node:
    """Root node with an RLT2 dual (RLT1 when n < 3), already bounded."""
    root = Node.cold(inst.n, ())
    level = 2 if inst.n >= 3 else 1
    root.dual = init_dual(inst, level, cfg.mem_cap)
    _ascend(root, incumbent, cfg.ascent_config())
    logger.info("%s: root lower bound %.6f", inst.name, root.lower_bound)
    return root


def _ascend(node: Node, incumbent: Incumbent, acfg: AscentConfig) -> None:
    ub = incumbent.bound
    if ub is not None and not incumbent.prunes(node.lower_bound):
        dual_ascent(node.dual, ub - node.base_lb, acfg)
    node.absorb_lb()
    node.bounded = True


class BranchAndBound:
    """Depth-first search shared by `workers` threads.

    Each worker pops from its own stack; an idle worker steals the shallowest
    bottom node among the other stacks. With one worker the run is a fixed
    LIFO traversal.
    """

    def __init__(self, inst: QapInstance, cfg: SolverConfig | None = None,
                 resume: CheckpointState | None = None):
        self.inst = inst
        self.cfg = cfg or SolverConfig()
        self.resume = resume
        self.acfg = self.cfg.ascent_config()
        self.incumbent: Incumbent | None = None
        self.root_lb = 0.0
        self.nodes_expanded = 0
        self.nodes_fathomed = 0
        self.max_depth = 0
        self.peak_tensor_bytes = 0
        self.trajectory: list[tuple[float, float, float | None]] = []
        self._seq = count()
        self._cond = threading.Condition()
        self._stacks: list[deque] = [deque() for _ in range(self.cfg.workers)]
        self._in_progress: dict[int, Node] = {}
        self._active = 0
        self._stop = False
        self._capped = False
        self._done = False
        self._pause = False
        self._processed = 0
        self._seen_improvements = 0
        self._prior_elapsed = 0.0
        self._t0 = 0.0
        self._last_checkpoint = 0.0

    # -- public -----------------------------------------------------------

    def request_stop(self) -> None:
        """Stop taking nodes; the open set stays intact for a checkpoint."""
        self._stop = True
        self._capped = True

    def solve(self) -> SolveReport:
        self._t0 = time.monotonic()
        self._last_checkpoint = self._t0
        if self.resume is not None:
            self._restore(self.resume)
        else:
            self.incumbent = self._initial_incumbent()
            root = make_root(self.inst, self.incumbent, self.cfg)
            self._note_tensor(root.dual)
            self.root_lb = root.lower_bound
            root.seq = next(self._seq)
            self._stacks[0].append(root)
        self._sample()

        if self.cfg.workers == 1:
            self._worker(0)
        else:
            with ThreadPoolExecutor(max_workers=self.cfg.workers, thread_name_prefix="bnb") as pool:
                futures = [pool.submit(self._worker, w) for w in range(self.cfg.workers)]
                for f in futures:
                    f.result()

        self._sample()
        if not any(self._stacks):
            self._capped = False
        if self._capped and self.cfg.checkpoint_path:
            write_checkpoint(self.cfg.checkpoint_path, self.snapshot())
        return self._report()

    def snapshot(self) -> CheckpointState:
        """Open nodes and incumbent; only valid while no node is in progress."""
        with self._cond:
            open_nodes = [OpenNode(node.fixed, node.lower_bound)
                          for stack in self._stacks for node in stack]
            inc = self.incumbent
            return CheckpointState(
                n=self.inst.n,
                digest=instance_digest(self.inst),
                incumbent_perm=inc.perm,
                incumbent_value=inc.value,
                known_value=inc.known_value,
                open_nodes=open_nodes,
                stats={
                    "nodes_expanded": self.nodes_expanded,
                    "nodes_fathomed": self.nodes_fathomed,
                    "max_depth": self.max_depth,
                    "root_lb": self.root_lb,
                    "peak_tensor_bytes": self.peak_tensor_bytes,
                    "elapsed": self._elapsed(),
                },
            )

    # -- setup ------------------------------------------------------------

    def _initial_incumbent(self) -> Incumbent:
        perm = self.cfg.initial_perm
        if perm is None and self.cfg.ub is None:
            perm, _ = heuristic_ub(self.inst, HeuristicConfig(
                restarts=self.cfg.restarts, rng_seed=self.cfg.seed, workers=self.cfg.workers))
        return Incumbent(self.inst, perm, self.cfg.ub)

    def _restore(self, state: CheckpointState) -> None:
        self.incumbent = Incumbent(self.inst, state.incumbent_perm, state.known_value)
        stats = state.stats
        self.nodes_expanded = int(stats.get("nodes_expanded", 0))
        self.nodes_fathomed = int(stats.get("nodes_fathomed", 0))
        self.max_depth = int(stats.get("max_depth", 0))
        self.root_lb = float(stats.get("root_lb", 0.0))
        self.peak_tensor_bytes = int(stats.get("peak_tensor_bytes", 0))
        self._prior_elapsed = float(stats.get("elapsed", 0.0))
        for k, on in enumerate(state.open_nodes):
            node = Node.cold(self.inst.n, on.fixed, estimate=on.lb, seq=next(self._seq))
            self._stacks[k % self.cfg.workers].append(node)
        logger.info("%s: resumed with %d open nodes", self.inst.name, len(state.open_nodes))

    # -- worker loop ------------------------------------------------------

    def _worker(self, w: int) -> None:
        while True:
            with self._cond:
                node = self._next_node(w)
                if node is None:
                    return
                self._in_progress[w] = node
            try:
                children = self._process(node)
            except BaseException:
                with self._cond:
                    self._stop = True
                    self._cond.notify_all()
                raise
            with self._cond:
                del self._in_progress[w]
                self._stacks[w].extend(children)
                self._active -= 1
                self._processed += 1
                self._check_limits()
                self._cond.notify_all()
            if (self._processed % TRAJECTORY_EVERY == 0
                    or self.incumbent.improvements != self._seen_improvements):
                self._sample()

    def _next_node(self, w: int) -> Node | None:
        while True:
            if self._stop or self._done:
                return None
            if self._pause:
                if self._active == 0:
                    write_checkpoint(self.cfg.checkpoint_path, self.snapshot())
                    self._last_checkpoint = time.monotonic()
                    self._pause = False
                    self._cond.notify_all()
                    continue
                self._cond.wait()
                continue
            node = self._take(w)
            if node is not None:
                self._active += 1
                self.max_depth = max(self.max_depth, node.depth)
                return node
            if self._active == 0:
                self._done = True
                self._cond.notify_all()
                return None
            self._cond.wait()

    def _take(self, w: int) -> Node | None:
        own = self._stacks[w]
        if own:
            return own.pop()
        donors = [s for s in self._stacks if s]
        if not donors:
            return None
        donor = min(donors, key=lambda s: (s[0].depth, s[0].seq))
        return donor.popleft()

    def _check_limits(self) -> None:
        cfg = self.cfg
        if cfg.node_limit is not None and self.nodes_expanded + self.nodes_fathomed >= cfg.node_limit:
            self.request_stop()
        elif cfg.time_cap is not None and time.monotonic() - self._t0 > cfg.time_cap:
            logger.warning("%s: time cap of %.1fs reached", self.inst.name, cfg.time_cap)
            self.request_stop()
        elif cfg.checkpoint_path and time.monotonic() - self._last_checkpoint >= cfg.checkpoint_interval:
            self._pause = True

    # -- node processing --------------------------------------------------

    def _note_tensor(self, dual) -> None:
        with self._cond:
            self.peak_tensor_bytes = max(self.peak_tensor_bytes, dual.nbytes)

    def _fathom(self, node: Node) -> list[Node]:
        node.release()
        with self._cond:
            self.nodes_fathomed += 1
        return []

    def _process(self, node: Node) -> list[Node]:
        inc = self.incumbent
        if inc.prunes(node.lower_bound):
            return self._fathom(node)
        if node.free <= 2:
            for q in permutations(range(node.free)):
                inc.offer(node.completion(q))
            return self._fathom(node)

        if not node.bounded:
            level = 2 if node.depth <= self.cfg.warm_depth else 1
            self._note_tensor(node.ensure_dual(self.inst, level, self.cfg.mem_cap))
            _ascend(node, inc, self.acfg)
            logger.debug("node depth %d: lb %.6f", node.depth, node.lower_bound)
            if inc.prunes(node.lower_bound):
                return self._fathom(node)

        choice = strong_branch_select(self.inst, node, inc, self.cfg.sb_iters, self.acfg)
        node.estimate = max(node.estimate, choice.score)
        if inc.prunes(node.lower_bound):
            return self._fathom(node)

        warm = node.dual.level == 2 and node.depth + 1 <= self.cfg.warm_depth
        with self._cond:
            children = branch_children(self.inst, node, choice, warm, self._seq)
            self.nodes_expanded += 1
        node.release()
        return children

    # -- reporting --------------------------------------------------------

    def _elapsed(self) -> float:
        return self._prior_elapsed + time.monotonic() - self._t0

    def _sample(self) -> None:
        with self._cond:
            self._seen_improvements = self.incumbent.improvements
            open_lbs = [node.lower_bound for stack in self._stacks for node in stack]
            open_lbs += [node.lower_bound for node in self._in_progress.values()]
            ub = self.incumbent.value
            lb = min(open_lbs) if open_lbs else (ub if ub is not None else self.root_lb)
            self.trajectory.append((round(self._elapsed(), 6), float(lb), ub))

    def _report(self) -> SolveReport:
        inc = self.incumbent
        if self._capped:
            status = SolveStatus.CAPPED
        elif inc.perm is not None and (inc.known_value is None or inc.value <= inc.known_value):
            status = SolveStatus.OPTIMAL
        else:
            status = SolveStatus.UB_ONLY
        ref = inc.value if inc.value is not None else inc.known_value
        root_gap = (ref - self.root_lb) / ref if ref else None
        n = self.inst.n
        report = SolveReport(
            instance=self.inst.name,
            n=n,
            status=status,
            value=inc.value,
            permutation=None if inc.perm is None else [j + 1 for j in inc.perm],
            root_lb=self.root_lb,
            root_gap=root_gap,
            nodes_expanded=self.nodes_expanded,
            nodes_fathomed=self.nodes_fathomed,
            max_depth=self.max_depth,
            wall_seconds=self._elapsed(),
            peak_tensor_bytes=self.peak_tensor_bytes,
            trajectory=list(self.trajectory),
            config=self.cfg.echo(),
        )
        logger.info("%s: %s, value %s, %d nodes expanded, %d fathomed", self.inst.name,
                    status.value, inc.value, self.nodes_expanded, self.nodes_fathomed)
        return report


def solve_bnb(inst: QapInstance, cfg: SolverConfig | None = None,
              resume: CheckpointState | None = None) -> SolveReport:
    """Prove the optimum of inst (or stop at cfg's time/node limits)."""
    return BranchAndBound(inst, cfg, resume).solve()
