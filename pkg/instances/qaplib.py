"""QAPLIB .dat / .sln reading and writing.

.dat: n, then n*n flow entries row-major, then n*n distance entries row-major.
.sln: n, objective value, then n 1-based location indices.
Any whitespace layout is accepted; commas in .sln files count as whitespace.
"""
from __future__ import annotations

import logging
import re
from os import PathLike
from typing import BinaryIO, Iterator

import numpy as np

from .model import Permutation, QapInstance, evaluate

logger = logging.getLogger(__name__)

_TOKEN = re.compile(rb"[^\s,]+")
_INT64_MAX = np.iinfo(np.int64).max

FLOW_FIRST = "flow_first"
DISTANCE_FIRST = "distance_first"


class ParseError(ValueError):
    """Malformed QAPLIB input; `offset` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class OrientationError(ValueError):
    """A declared solution value matches neither flow/distance role assignment."""


def _read_bytes(source) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, str):
        return source.encode()
    return source.read()


def _tokens(data: bytes) -> Iterator[tuple[int, int]]:
    """Yield (value, offset) for each integer token."""
    for m in _TOKEN.finditer(data):
        tok = m.group()
        try:
            value = int(tok)
        except ValueError:
            raise ParseError(f"malformed integer token {tok.decode(errors='replace')!r}", m.start()) from None
        if abs(value) > _INT64_MAX:
            raise ParseError(f"integer {value} does not fit in 64 bits", m.start())
        yield value, m.start()


def _take(tokens: list[tuple[int, int]], start: int, count: int, what: str, end: int) -> list[int]:
    chunk = tokens[start:start + count]
    if len(chunk) < count:
        raise ParseError(f"expected {count} {what} entries, found {len(chunk)}", end)
    for value, offset in chunk:
        if value < 0:
            raise ParseError(f"negative {what} entry {value}", offset)
    return [v for v, _ in chunk]


def parse_instance(source: bytes | str | BinaryIO, name: str = "") -> QapInstance:
    """Parse a QAPLIB instance from bytes, text or a binary stream."""
    data = _read_bytes(source)
    tokens = list(_tokens(data))
    if not tokens:
        raise ParseError("empty instance, expected size n", 0)
    n, offset = tokens[0]
    if n < 2:
        raise ParseError(f"instance size must be >= 2, got {n}", offset)
    nn = n * n
    flow = _take(tokens, 1, nn, "flow", len(data))
    dist = _take(tokens, 1 + nn, nn, "distance", len(data))
    if len(tokens) > 1 + 2 * nn:
        value, offset = tokens[1 + 2 * nn]
        raise ParseError(f"unexpected trailing token {value}", offset)
    try:
        return QapInstance(name, np.array(flow, dtype=np.int64).reshape(n, n),
                           np.array(dist, dtype=np.int64).reshape(n, n))
    except ValueError as e:
        # the largest entry is the one that makes the objective overflow
        _, at = max(tokens[1:1 + 2 * nn], key=lambda t: t[0])
        raise ParseError(str(e), at) from None


def parse_solution(source: bytes | str | BinaryIO) -> tuple[int, Permutation]:
    """Parse a QAPLIB solution; returns (declared value, 0-based permutation).

    The declared value is not checked against any instance.
    """
    data = _read_bytes(source)
    tokens = list(_tokens(data))
    if len(tokens) < 2:
        raise ParseError("expected size and objective value", len(data))
    n, offset = tokens[0]
    if n < 1:
        raise ParseError(f"solution size must be >= 1, got {n}", offset)
    value = tokens[1][0]
    entries = tokens[2:]
    if len(entries) != n:
        at = entries[n][1] if len(entries) > n else len(data)
        raise ParseError(f"expected {n} permutation entries, found {len(entries)}", at)
    seen = set()
    perm = []
    for loc, offset in entries:
        if not 1 <= loc <= n:
            raise ParseError(f"location {loc} outside 1..{n}", offset)
        if loc in seen:
            raise ParseError(f"duplicate location {loc}", offset)
        seen.add(loc)
        perm.append(loc - 1)
    return value, tuple(perm)


def _matrix_lines(m: np.ndarray) -> list[str]:
    width = max(len(str(int(m.max()))), 1)
    return [" ".join(f"{int(x):>{width}}" for x in row) for row in m]


def format_instance(inst: QapInstance) -> str:
    """Serialize to QAPLIB .dat text (flow block, then distance block)."""
    lines = [str(inst.n), ""]
    lines += _matrix_lines(inst.flow)
    lines.append("")
    lines += _matrix_lines(inst.dist)
    return "\n".join(lines) + "\n"


def format_solution(value: int, perm: Permutation) -> str:
    """Serialize to QAPLIB .sln text (1-based)."""
    return f"{len(perm)} {value}\n" + " ".join(str(j + 1) for j in perm) + "\n"


def read_instance(path: str | PathLike) -> QapInstance:
    name = str(path).replace("\\", "/").rsplit("/", 1)[-1].rsplit(".", 1)[0]
    with open(path, "rb") as f:
        return parse_instance(f, name=name)


def read_solution(path: str | PathLike) -> tuple[int, Permutation]:
    with open(path, "rb") as f:
        return parse_solution(f)


def match_orientation(inst: QapInstance, value: int, perm: Permutation) -> tuple[QapInstance, str]:
    """Return the instance oriented so that evaluate(inst, perm) == value.

    QAPLIB families disagree on which matrix comes first; both role
    assignments are tried, flow-first before distance-first.
    """
    if len(perm) != inst.n:
        raise ValueError(f"solution has {len(perm)} entries, instance has n={inst.n}")
    if evaluate(inst, perm) == value:
        return inst, FLOW_FIRST
    swapped = inst.swapped()
    if evaluate(swapped, perm) == value:
        logger.info("%s: solution matches with distance matrix first", inst.name)
        return swapped, DISTANCE_FIRST
    raise OrientationError(
        f"{inst.name}: declared value {value} matches neither orientation "
        f"(flow-first {evaluate(inst, perm)}, distance-first {evaluate(swapped, perm)})")


def load_fixture(dat_path: str | PathLike, sln_path: str | PathLike) -> tuple[QapInstance, int, Permutation, str]:
    """Load a .dat/.sln pair, normalised to the flow-first orientation."""
    inst = read_instance(dat_path)
    value, perm = read_solution(sln_path)
    inst, orientation = match_orientation(inst, value, perm)
    return inst, value, perm, orientation
