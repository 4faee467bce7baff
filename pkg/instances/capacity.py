"""Tensor memory estimates for the RLT2 dual state."""
from __future__ import annotations

from dataclasses import dataclass

from config import (
    LAP_CHUNK_ARRAYS,
    LAP_CHUNK_ENTRIES,
    MEMORY_OVERHEAD_FACTOR,
    TRANSFER_CHUNK_ARRAYS,
    TRANSFER_CHUNK_ENTRIES,
)

BYTES_PER_ENTRY = 8


def working_bytes(level: int) -> int:
    """Peak temporaries of one ascent pass: a LAP batch, plus a D transfer chunk at level 2."""
    entries = LAP_CHUNK_ARRAYS * LAP_CHUNK_ENTRIES
    if level >= 2:
        entries = max(entries, TRANSFER_CHUNK_ARRAYS * TRANSFER_CHUNK_ENTRIES)
    return BYTES_PER_ENTRY * entries


@dataclass(frozen=True)
class MemoryEstimate:
    n: int
    entries_B: int
    entries_C: int
    entries_D: int
    bytes_total: int

    def bytes_for_level(self, level: int) -> int:
        """Bytes for an RLT1 (B, C) or RLT2 (B, C, D) state and its ascent temporaries."""
        entries = self.entries_B + self.entries_C + (self.entries_D if level >= 2 else 0)
        return int(BYTES_PER_ENTRY * entries * MEMORY_OVERHEAD_FACTOR) + working_bytes(level)

    def to_dict(self) -> dict:
        return {"n": self.n, "entries_B": self.entries_B, "entries_C": self.entries_C,
                "entries_D": self.entries_D, "bytes_total": self.bytes_total}


class CapacityError(MemoryError):
    """The estimated tensor memory exceeds the configured cap."""

    def __init__(self, estimate: MemoryEstimate, limit: int, level: int = 2):
        needed = estimate.bytes_for_level(level)
        super().__init__(f"n={estimate.n} RLT{level} state needs ~{needed} bytes, cap is {limit} bytes")
        self.estimate = estimate
        self.limit = limit
        self.level = level


def estimate_memory(n: int) -> MemoryEstimate:
    """Entry counts for B, C and the half-stored D (complementary submatrices)."""
    if n < 3:
        raise ValueError(f"memory estimate needs n >= 3, got {n}")
    entries_B = n * n
    entries_C = n * n * (n - 1) ** 2
    entries_D = (n * (n - 1) * (n - 2)) ** 2 // 2
    total = int(BYTES_PER_ENTRY * (entries_B + entries_C + entries_D) * MEMORY_OVERHEAD_FACTOR)
    return MemoryEstimate(n, entries_B, entries_C, entries_D, total + working_bytes(2))


def check_capacity(n: int, mem_cap: int | None, level: int = 2) -> MemoryEstimate | None:
    """Raise CapacityError if a level-`level` state of size n exceeds mem_cap."""
    if n < 3:
        return None
    estimate = estimate_memory(n)
    if mem_cap is not None and estimate.bytes_for_level(level) > mem_cap:
        raise CapacityError(estimate, mem_cap, level)
    return estimate
