"""QAP instance and permutation types, objective evaluation."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

Permutation = tuple[int, ...]

_INT64_MAX = np.iinfo(np.int64).max


class DimensionError(ValueError):
    """Permutation and instance sizes disagree."""


@dataclass(frozen=True, eq=False)
class QapInstance:
    """n facilities, n locations; cost of p is sum_ik flow[i,k] * dist[p[i],p[k]]."""

    name: str
    flow: np.ndarray
    dist: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        flow = np.ascontiguousarray(self.flow, dtype=np.int64)
        dist = np.ascontiguousarray(self.dist, dtype=np.int64)
        if flow.ndim != 2 or flow.shape[0] != flow.shape[1]:
            raise ValueError(f"flow matrix must be square, got shape {flow.shape}")
        if dist.shape != flow.shape:
            raise ValueError(f"distance shape {dist.shape} differs from flow shape {flow.shape}")
        n = flow.shape[0]
        if n < 2:
            raise ValueError(f"instance size must be >= 2, got {n}")
        if (flow < 0).any() or (dist < 0).any():
            raise ValueError("flow and distance entries must be nonnegative")
        # n^2 * max(F) * max(D) must fit in int64
        if n * n * int(flow.max()) * int(dist.max()) > _INT64_MAX:
            raise ValueError("objective may overflow 64-bit integers")
        flow.setflags(write=False)
        dist.setflags(write=False)
        object.__setattr__(self, "flow", flow)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "n", n)

    def swapped(self) -> "QapInstance":
        """Same data with flow and distance roles exchanged."""
        return QapInstance(self.name, self.dist, self.flow)

    def __repr__(self):
        return f"QapInstance(name={self.name!r}, n={self.n})"


def check_permutation(perm: Sequence[int], n: int) -> Permutation:
    """Validate a 0-based permutation of range(n) and return it as a tuple."""
    p = tuple(int(x) for x in perm)
    if len(p) != n:
        raise DimensionError(f"permutation has {len(p)} entries, instance has n={n}")
    if sorted(p) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {list(p)}")
    return p


def evaluate(inst: QapInstance, perm: Sequence[int]) -> int:
    """Exact objective, diagonal (linear) terms included."""
    p = np.asarray(check_permutation(perm, inst.n), dtype=np.intp)
    return int(np.sum(inst.flow * inst.dist[np.ix_(p, p)]))


def evaluate_split(inst: QapInstance, perm: Sequence[int]) -> tuple[int, int]:
    """(linear part sum_i f_ii d_p(i)p(i), quadratic part over i != k)."""
    p = np.asarray(check_permutation(perm, inst.n), dtype=np.intp)
    dp = inst.dist[np.ix_(p, p)]
    linear = int(np.sum(np.diagonal(inst.flow) * np.diagonal(dp)))
    off = ~np.eye(inst.n, dtype=bool)
    return linear, int(np.sum(inst.flow[off] * dp[off]))


def instance_digest(inst: QapInstance) -> str:
    """SHA-256 over n and both matrices (little-endian int64)."""
    h = hashlib.sha256()
    h.update(str(inst.n).encode())
    h.update(inst.flow.astype("<i8").tobytes())
    h.update(inst.dist.astype("<i8").tobytes())
    return h.hexdigest()
