"""Tabular results and their CSV/JSON serialization.

CSV output is plot-ready and deterministic: '.' decimal separator, '\\n'
line endings, a header row, and floats printed with 17 significant digits
so that re-parsing reproduces every value bit-exactly.  Metadata (scenario
echo, version, wall time) travels only in the JSON form; CSV stays pure
tabular so identical runs emit identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DomainError

__all__ = ["ResultTable", "emit", "parse_csv", "parse_json"]

FORMATS = ("csv", "json")


@dataclass(frozen=True, eq=False)
class ResultTable:
    """Named numeric columns plus a free-form metadata block."""

    columns: list[str]
    rows: np.ndarray
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=float)
        if rows.size == 0:
            rows = rows.reshape(0, len(self.columns))
        if rows.ndim != 2 or rows.shape[1] != len(self.columns):
            raise DomainError(
                f"rows must have {len(self.columns)} columns, got shape {rows.shape}"
            )
        object.__setattr__(self, "rows", rows)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "columns": list(self.columns),
            "data": {name: self.rows[:, i].tolist() for i, name in enumerate(self.columns)},
            "metadata": self.metadata,
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def emit(table: ResultTable, fmt: str) -> bytes:
    """Serialize ``table``; ``fmt`` is 'csv' or 'json'."""
    if fmt == "csv":
        return table.to_csv().encode("utf-8")
    if fmt == "json":
        return table.to_json().encode("utf-8")
    raise DomainError(f"format must be one of {FORMATS}, got {fmt!r}")


def parse_csv(payload: str | bytes) -> ResultTable:
    """Inverse of the CSV emitter (metadata-free)."""
    text = payload.decode("utf-8") if isinstance(payload, bytes) else payload
    lines = [ln for ln in text.split("\n") if ln]
    if not lines:
        raise DomainError("empty CSV payload")
    columns = lines[0].split(",")
    rows = [[float(tok) for tok in ln.split(",")] for ln in lines[1:]]
    data = np.array(rows, dtype=float) if rows else np.empty((0, len(columns)))
    return ResultTable(columns=columns, rows=data)


def parse_json(payload: str | bytes) -> ResultTable:
    """Inverse of the JSON emitter."""
    text = payload.decode("utf-8") if isinstance(payload, bytes) else payload
    doc = json.loads(text)
    try:
        columns = list(doc["columns"])
        data = doc["data"]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed result JSON: missing {exc}") from None
    rows = np.array([data[name] for name in columns], dtype=float).T
    if rows.size == 0:
        rows = rows.reshape(0, len(columns))
    return ResultTable(columns=columns, rows=rows, metadata=doc.get("metadata", {}))
