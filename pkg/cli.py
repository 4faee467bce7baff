#!/usr/bin/env python3
"""Command-line entry point: solve, bound, verify, heuristic and capacity."""
from __future__ import annotations

import argparse
import json
import logging
import signal
import sys
import time

import config
from bnb import BranchAndBound, CheckpointError, SolverConfig, SolveStatus, read_checkpoint
from heuristic import HeuristicConfig, heuristic_ub
from instances import (
    CapacityError,
    DimensionError,
    OrientationError,
    ParseError,
    estimate_memory,
    evaluate,
    match_orientation,
    read_instance,
    read_solution,
)
from lap import AUCTION, HUNGARIAN
from rlt import AscentConfig, dual_ascent, init_dual

logger = logging.getLogger("qap")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAPPED = 2
EXIT_CAPACITY = 3
EXIT_MISMATCH = 4


def _emit(payload: dict, text: str, fmt: str) -> None:
    print(json.dumps(payload, indent=2) if fmt == "json" else text)


def _heuristic_incumbent(inst, restarts: int, seed: int, workers: int = 1):
    return heuristic_ub(inst, HeuristicConfig(restarts=restarts, rng_seed=seed, workers=workers))


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    cfg = SolverConfig(
        workers=args.workers,
        K=args.k,
        sb_iters=args.sb_iters,
        warm_depth=args.warm_depth,
        lap_method=args.lap,
        ub=args.ub,
        restarts=args.restarts,
        seed=args.seed,
        time_cap=args.time_cap,
        node_limit=args.node_limit,
        mem_cap=args.mem_cap,
        checkpoint_path=args.checkpoint,
        checkpoint_interval=args.checkpoint_interval,
    )
    resume = read_checkpoint(args.resume, inst) if args.resume else None
    solver = BranchAndBound(inst, cfg, resume)

    def on_interrupt(signum, frame):
        logger.warning("interrupt received, stopping after the nodes in progress")
        solver.request_stop()

    previous = signal.signal(signal.SIGINT, on_interrupt)
    try:
        report = solver.solve()
    finally:
        signal.signal(signal.SIGINT, previous)
    if report.value is not None and evaluate(inst, [j - 1 for j in report.permutation]) != report.value:
        raise AssertionError("reported permutation does not evaluate to the reported value")
    _emit(report.to_dict(), report.to_text(), args.report)
    return EXIT_OK if report.status is SolveStatus.OPTIMAL else EXIT_CAPPED


def cmd_bound(args) -> int:
    inst = read_instance(args.instance)
    if args.ub is not None:
        ub = args.ub
    else:
        _, ub = _heuristic_incumbent(inst, args.restarts, args.seed)
    level = args.level if inst.n >= 3 else 1
    start = time.monotonic()
    state = init_dual(inst, level, args.mem_cap)
    result = None
    if ub > 0:
        result = dual_ascent(state, ub, AscentConfig(K=args.k, max_iters=args.max_iters, lap_method=args.lap))
    seconds = time.monotonic() - start
    gap = (ub - state.lb) / ub if ub > 0 else 0.0
    payload = {
        "instance": inst.name,
        "n": inst.n,
        "level": level,
        "lb": state.lb,
        "ub": ub,
        "gap": gap,
        "iterations": result.iterations if result else 0,
        "status": result.status.value if result else "pruned",
        "seconds": seconds,
    }
    text = "\n".join(f"{k:<12}{v}" for k, v in payload.items())
    _emit(payload, text, args.report)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    value, perm = read_solution(args.solution)
    try:
        oriented, orientation = match_orientation(inst, value, perm)
    except OrientationError as e:
        print(f"declared {value}")
        print(f"mismatch: {e}")
        return EXIT_MISMATCH
    print(f"declared {value}")
    print(f"computed {evaluate(oriented, perm)} ({orientation})")
    return EXIT_OK


def cmd_heuristic(args) -> int:
    inst = read_instance(args.instance)
    perm, value = _heuristic_incumbent(inst, args.restarts, args.seed, args.workers)
    payload = {"instance": inst.name, "n": inst.n, "value": value,
               "permutation": [j + 1 for j in perm], "seed": args.seed, "restarts": args.restarts}
    text = f"{value}\n" + " ".join(str(j + 1) for j in perm)
    _emit(payload, text, args.report)
    return EXIT_OK


def cmd_capacity(args) -> int:
    n = int(args.target) if args.target.isdigit() else read_instance(args.target).n
    est = estimate_memory(n)
    payload = est.to_dict()
    payload["bytes_rlt1"] = est.bytes_for_level(1)
    text = "\n".join([
        f"n          {est.n}",
        f"entries B  {est.entries_B:,}",
        f"entries C  {est.entries_C:,}",
        f"entries D  {est.entries_D:,}",
        f"bytes RLT1 {est.bytes_for_level(1):,}",
        f"bytes RLT2 {est.bytes_total:,}",
    ])
    _emit(payload, text, args.report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qap", description="Exact QAP solving with RLT dual-ascent bounds.")
    p.add_argument("--log-level", default=config.QAP_LOG_LEVEL, help="Logging level (default: QAP_LOG_LEVEL or WARNING)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, report_default="json"):
        sp.add_argument("--report", choices=("json", "text"), default=report_default, help="Output format")

    def ascent_flags(sp):
        sp.add_argument("--k", type=float, default=config.DEFAULT_K, help="Stop when an iteration gains less than K*UB")
        sp.add_argument("--lap", choices=(HUNGARIAN, AUCTION), default=HUNGARIAN, help="Linear assignment solver")
        sp.add_argument("--mem-cap", type=config.parse_bytes, default=config.get_mem_cap(),
                        help="Refuse tensor states above this many bytes (e.g. 8G)")
        sp.add_argument("--restarts", type=int, default=50, help="Heuristic restarts for the initial upper bound")
        sp.add_argument("--seed", type=int, default=0, help="Heuristic random seed")

    s = sub.add_parser("solve", help="Solve an instance to proven optimality")
    s.add_argument("instance")
    ascent_flags(s)
    s.add_argument("--ub", type=int, help="Known upper bound (skips the heuristic)")
    s.add_argument("--workers", type=int, default=config.get_workers())
    s.add_argument("--sb-iters", type=int, default=config.DEFAULT_SB_ITERS)
    s.add_argument("--warm-depth", type=int, default=config.DEFAULT_WARM_DEPTH)
    s.add_argument("--checkpoint", help="Checkpoint file written periodically and on interrupt")
    s.add_argument("--checkpoint-interval", type=float, default=config.QAP_CHECKPOINT_INTERVAL)
    s.add_argument("--resume", help="Resume from a checkpoint file")
    s.add_argument("--time-cap", type=float, help="Stop after this many seconds")
    s.add_argument("--node-limit", type=int, help="Stop after this many processed nodes")
    common(s)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bound", help="Root lower bound and gap")
    b.add_argument("instance")
    ascent_flags(b)
    b.add_argument("--level", type=int, choices=(1, 2), default=2)
    b.add_argument("--ub", type=int, help="Upper bound for the gap (default: heuristic)")
    b.add_argument("--max-iters", type=int, default=config.DEFAULT_MAX_ITERS)
    common(b)
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", help="Check a solution file against an instance")
    v.add_argument("instance")
    v.add_argument("solution")
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser("heuristic", help="Multi-start local search upper bound")
    h.add_argument("instance")
    h.add_argument("--restarts", type=int, default=50)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--workers", type=int, default=1)
    common(h, "text")
    h.set_defaults(func=cmd_heuristic)

    c = sub.add_parser("capacity", help="RLT2 tensor memory for a size or an instance file")
    c.add_argument("target", help="n, or an instance path")
    common(c, "text")
    c.set_defaults(func=cmd_capacity)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CapacityError as e:
        print(json.dumps({"error": "capacity", "message": str(e), "estimate": e.estimate.to_dict(),
                          "limit": e.limit}), file=sys.stderr)
        return EXIT_CAPACITY
    except (ParseError, DimensionError, CheckpointError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
