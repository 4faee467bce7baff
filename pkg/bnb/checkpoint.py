"""Checkpoints: the open-node set and incumbent of a paused search, as versioned JSON."""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field

from config import CHECKPOINT_FORMAT_VERSION
from instances import Permutation, QapInstance, instance_digest

logger = logging.getLogger(__name__)


class CheckpointError(ValueError):
    """A checkpoint stream that is truncated, foreign, or of another format version."""


@dataclass
class OpenNode:
    fixed: tuple[tuple[int, int], ...]
    lb: float


@dataclass
class CheckpointState:
    n: int
    digest: str
    incumbent_perm: Permutation | None
    incumbent_value: int | None
    known_value: int | None
    open_nodes: list[OpenNode]
    stats: dict = field(default_factory=dict)


def checkpoint_save(state: CheckpointState) -> bytes:
    doc = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "instance_digest": state.digest,
        "n": state.n,
        "incumbent": None if state.incumbent_perm is None else {
            "value": state.incumbent_value,
            "permutation": [j + 1 for j in state.incumbent_perm],
        },
        "known_value": state.known_value,
        "open_nodes": [
            {"fixed": [[i + 1, j + 1] for i, j in node.fixed], "lb": node.lb}
            for node in state.open_nodes
        ],
        "stats": state.stats,
    }
    return json.dumps(doc, sort_keys=True).encode("utf-8")


def checkpoint_load(data: bytes, inst: QapInstance) -> CheckpointState:
    """Decode a checkpoint for inst; refuses other versions and other instances."""
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(f"truncated or corrupt checkpoint: {e}") from e
    if not isinstance(doc, dict):
        raise CheckpointError("checkpoint is not a JSON object")
    version = doc.get("format_version")
    if version != CHECKPOINT_FORMAT_VERSION:
        raise CheckpointError(f"checkpoint format version {version!r}, expected {CHECKPOINT_FORMAT_VERSION}")
    digest = instance_digest(inst)
    if doc.get("instance_digest") != digest:
        raise CheckpointError(f"checkpoint belongs to another instance (digest {doc.get('instance_digest')!r})")
    try:
        inc = doc["incumbent"]
        open_nodes = [
            OpenNode(tuple((i - 1, j - 1) for i, j in node["fixed"]), float(node["lb"]))
            for node in doc["open_nodes"]
        ]
        return CheckpointState(
            n=int(doc["n"]),
            digest=digest,
            incumbent_perm=None if inc is None else tuple(j - 1 for j in inc["permutation"]),
            incumbent_value=None if inc is None else int(inc["value"]),
            known_value=doc.get("known_value"),
            open_nodes=open_nodes,
            stats=dict(doc.get("stats", {})),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"malformed checkpoint: {e!r}") from e


def write_checkpoint(path: str, state: CheckpointState) -> None:
    """Write to path.tmp, then rename over path."""
    tmp = path + ".tmp"
    with open(tmp, "wb") as f:
        f.write(checkpoint_save(state))
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)
    logger.info("checkpoint written to %s (%d open nodes)", path, len(state.open_nodes))


def read_checkpoint(path: str, inst: QapInstance) -> CheckpointState:
    with open(path, "rb") as f:
        return checkpoint_load(f.read(), inst)
