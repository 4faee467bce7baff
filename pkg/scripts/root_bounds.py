#!/usr/bin/env python3
"""Print the root lower bound and gap of every instance in sampledata/ that fits in memory."""
import sys
import os
import time

# Allow running from repo root
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import get_mem_cap, parse_bytes
from instances import CapacityError, load_fixture
from rlt import AscentConfig, dual_ascent, init_dual

SAMPLEDATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "sampledata")


def main(level: int = 2, K: float = 1e-5, mem_cap: int | None = None) -> None:
    names = sorted(f[:-4] for f in os.listdir(SAMPLEDATA_DIR)
                   if f.endswith(".dat") and os.path.exists(os.path.join(SAMPLEDATA_DIR, f[:-4] + ".sln")))
    if not names:
        print(f"No .dat/.sln pairs in {SAMPLEDATA_DIR}")
        return
    print(f"{'instance':<10}{'n':>4}{'ub':>14}{'lb':>18}{'gap %':>10}{'iters':>7}{'sec':>9}")
    for name in names:
        inst, ub, _, _ = load_fixture(os.path.join(SAMPLEDATA_DIR, name + ".dat"),
                                      os.path.join(SAMPLEDATA_DIR, name + ".sln"))
        start = time.monotonic()
        try:
            state = init_dual(inst, level, mem_cap)
        except CapacityError as e:
            print(f"{name:<10}{inst.n:>4}  skip ({e})")
            continue
        result = dual_ascent(state, ub, AscentConfig(K=K))
        gap = 100 * (ub - state.lb) / ub
        print(f"{name:<10}{inst.n:>4}{ub:>14}{state.lb:>18.2f}{gap:>10.4f}{result.iterations:>7}"
              f"{time.monotonic() - start:>9.1f}")


if __name__ == "__main__":
    import argparse
    p = argparse.ArgumentParser(description="Root bounds for the QAPLIB fixtures in sampledata/.")
    p.add_argument("--level", type=int, choices=(1, 2), default=2, help="RLT level of the root bound")
    p.add_argument("--k", type=float, default=1e-5, help="Ascent stops when a pass gains less than K*UB")
    p.add_argument("--mem-cap", type=parse_bytes, default=get_mem_cap(), help="Skip instances above this size")
    args = p.parse_args()
    main(args.level, args.k, args.mem_cap)
