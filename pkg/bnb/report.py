"""Solve reports: JSON and text renderings of a finished (or capped) search."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from enum import Enum

from config import REPORT_SCHEMA_VERSION


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    UB_ONLY = "ub_only"
    CAPPED = "capped"


@dataclass
class SolveReport:
    """Outcome of solve_bnb. permutation is 1-based, as in QAPLIB solution files."""

    instance: str
    n: int
    status: SolveStatus
    value: int | None
    permutation: list[int] | None
    root_lb: float
    root_gap: float | None
    nodes_expanded: int
    nodes_fathomed: int
    max_depth: int
    wall_seconds: float
    peak_tensor_bytes: int
    trajectory: list[tuple[float, float, float | None]] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status.value
        d["trajectory"] = [list(t) for t in self.trajectory]
        return d

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "SolveReport":
        if data.get("schema_version") != REPORT_SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema version {data.get('schema_version')!r}")
        fields = dict(data)
        fields["status"] = SolveStatus(fields["status"])
        fields["trajectory"] = [tuple(t) for t in fields.get("trajectory", [])]
        return cls(**fields)

    def to_text(self) -> str:
        perm = " ".join(str(x) for x in self.permutation) if self.permutation else "-"
        gap = f"{100 * self.root_gap:.4f}%" if self.root_gap is not None else "-"
        lines = [
            f"instance        {self.instance} (n={self.n})",
            f"status          {self.status.value}",
            f"value           {self.value if self.value is not None else '-'}",
            f"permutation     {perm}",
            f"root lb         {self.root_lb:.6f}",
            f"root gap        {gap}",
            f"nodes expanded  {self.nodes_expanded}",
            f"nodes fathomed  {self.nodes_fathomed}",
            f"max depth       {self.max_depth}",
            f"wall seconds    {self.wall_seconds:.3f}",
            f"tensor bytes    {self.peak_tensor_bytes}",
        ]
        lines += [f"config          {k}={v}" for k, v in sorted(self.config.items())]
        return "\n".join(lines)
