"""Flat index arithmetic for the C and D tensors.

C has shape (n, n, n-1, n-1): C[i, j, r, s] is c_{ij,kl} with k the r-th
facility != i and l the s-th location != j.

D has shape (P, n, n-1, n-2, n-2) with P = n(n-1)/2 facility pairs i < k:
D[pair(i, k), j, t, r, s] is d_{ij,kl,pq} with l the t-th location != j,
p the r-th facility outside {i, k}, q the s-th location outside {j, l}.
Logical entries with i > k read the stored block of the pair (k, i).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator

import numpy as np

from config import TRANSFER_CHUNK_ENTRIES


def pair_index(n: int, i, k):
    """Index of facility pair i < k in row-major upper-triangle order."""
    return i * n - i * (i + 1) // 2 + (k - i - 1)


def c_flat(n: int, i, j, k, l):
    """Flat offset of c_{ij,kl} (i != k, j != l) in C.reshape(-1)."""
    return ((i * n + j) * (n - 1) + (k - (k > i))) * (n - 1) + (l - (l > j))


def d_flat(n: int, x, X, y, Y, z, Z):
    """Flat offset of the stored entry for logical d_{xX,yY,zZ}.

    Facilities x, y, z must be distinct, as must locations X, Y, Z.
    """
    x, X, y, Y = (np.asarray(a) for a in (x, X, y, Y))
    swap = x > y
    i = np.where(swap, y, x)
    k = np.where(swap, x, y)
    j = np.where(swap, Y, X)
    l = np.where(swap, X, Y)
    p = pair_index(n, i, k)
    t = l - (l > j)
    r = z - (z > i) - (z > k)
    s = Z - (Z > j) - (Z > l)
    return (((p * n + j) * (n - 1) + t) * (n - 2) + r) * (n - 2) + s


@dataclass(frozen=True)
class PairTable:
    """Complementary C entries, ordered like the stored D blocks (pair, j, t)."""

    fwd: np.ndarray   # c_{ij,kl}, i < k
    bwd: np.ndarray   # c_{kl,ij}


@dataclass(frozen=True)
class TripleTable:
    """The three stored representatives of every 6-element D class."""

    first: np.ndarray
    second: np.ndarray
    third: np.ndarray


@dataclass(frozen=True)
class EvalTable:
    """Index sets used by the logical evaluation of a permutation."""

    ci: np.ndarray    # ordered facility pairs i != k
    ck: np.ndarray
    di: np.ndarray    # facility i < k with a third facility m
    dk: np.ndarray
    dm: np.ndarray


@lru_cache(maxsize=16)
def pair_table(n: int) -> PairTable:
    pi, pk = np.triu_indices(n, 1)
    j = np.arange(n)
    t = np.arange(n - 1)
    I, J, T = np.meshgrid(pi, j, t, indexing="ij")
    K = np.broadcast_to(pk[:, None, None], I.shape)
    L = T + (T >= J)
    fwd = c_flat(n, I, J, K, L).reshape(-1)
    bwd = c_flat(n, K, L, I, J).reshape(-1)
    return PairTable(fwd, bwd)


@lru_cache(maxsize=16)
def _location_triples(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n), 3)), dtype=np.int64)


def triple_chunks(n: int, budget: int = TRANSFER_CHUNK_ENTRIES) -> Iterator[TripleTable]:
    """Stored representatives of every D class, about `budget` classes at a time.

    Classes run over facility triples i < k < m and ordered location triples;
    each chunk holds whole facility triples, so the chunks partition D.
    """
    facs = np.array(list(combinations(range(n), 3)), dtype=np.int64).reshape(-1, 3)
    locs = _location_triples(n)
    j, l, q = (locs[:, c][None, :] for c in range(3))
    step = max(1, budget // max(len(locs), 1))
    for start in range(0, len(facs), step):
        f = facs[start:start + step]
        i, k, m = (f[:, c][:, None] for c in range(3))
        yield TripleTable(
            first=d_flat(n, i, j, k, l, m, q).reshape(-1),
            second=d_flat(n, i, j, m, q, k, l).reshape(-1),
            third=d_flat(n, k, l, m, q, i, j).reshape(-1),
        )


@lru_cache(maxsize=16)
def eval_table(n: int) -> EvalTable:
    ci, ck = np.nonzero(~np.eye(n, dtype=bool))
    triples = [(i, k, m) for i in range(n) for k in range(i + 1, n) for m in range(n) if m != i and m != k]
    t = np.array(triples, dtype=np.int64).reshape(-1, 3)
    return EvalTable(ci, ck, t[:, 0], t[:, 1], t[:, 2])


def skip_table(n: int) -> np.ndarray:
    """(n, n-1) table: row e lists 0..n-1 without e."""
    r = np.arange(n - 1)
    return r[None, :] + (r[None, :] >= np.arange(n)[:, None])
