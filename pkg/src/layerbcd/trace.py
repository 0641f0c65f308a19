"""Loss trace records and their CSV wire format.

Schema: one comment line ``# algo=<mode>``, a header
``outer_iter,total,output,hidden_1,...,hidden_{L-1},wall_ms``, then one row
per outer iteration with floats printed at 17 significant digits (lossless
for float64). Wall time is informational only; consumers comparing traces
for reproducibility must ignore the wall_ms column.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .network import LossBreakdown


@dataclass(frozen=True)
class TraceRow:
    outer_iter: int
    loss: LossBreakdown
    wall_ms: float


class TraceWriter:
    """Streaming CSV writer, flushed after every row."""

    def __init__(self, path, algo: str, n_hidden: int):
        self._fh = open(path, "w", newline="")
        self._fh.write(f"# algo={algo}\n")
        cols = ["outer_iter", "total", "output"]
        cols += [f"hidden_{j}" for j in range(1, n_hidden + 1)]
        cols.append("wall_ms")
        self._fh.write(",".join(cols) + "\n")
        self.n_hidden = n_hidden

    def write(self, row: TraceRow) -> None:
        if len(row.loss.hidden) != self.n_hidden:
            raise ValueError(f"row has {len(row.loss.hidden)} hidden losses, trace expects {self.n_hidden}")
        vals = [str(row.outer_iter)]
        vals += [f"{v:.17g}" for v in (row.loss.total, row.loss.output, *row.loss.hidden, row.wall_ms)]
        self._fh.write(",".join(vals) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_trace(path, algo: str, rows: list[TraceRow]) -> None:
    n_hidden = len(rows[0].loss.hidden) if rows else 0
    with TraceWriter(path, algo, n_hidden) as w:
        for row in rows:
            w.write(row)


@dataclass(frozen=True)
class TraceData:
    """Parsed trace: algo tag, column names, and rows as float tuples."""

    algo: str
    columns: list[str]
    rows: list[list[float]]

    def column(self, name: str) -> list[float]:
        idx = self.columns.index(name)
        return [r[idx] for r in self.rows]


def read_trace(path) -> TraceData:
    with open(path) as fh:
        text = fh.read()
    lines = text.splitlines()
    if not lines:
        raise ValueError(f"{path}: empty trace file")
    algo = ""
    if lines[0].startswith("#"):
        comment = lines[0].lstrip("# ").strip()
        if comment.startswith("algo="):
            algo = comment[len("algo="):]
        lines = lines[1:]
    reader = csv.reader(io.StringIO("\n".join(lines)))
    header = next(reader, None)
    if not header or header[0] != "outer_iter":
        raise ValueError(f"{path}: missing trace header")
    rows = []
    for lineno, rec in enumerate(reader, start=3):
        if not rec:
            continue
        if len(rec) != len(header):
            raise ValueError(f"{path}:{lineno}: expected {len(header)} columns, got {len(rec)}")
        rows.append([float(v) for v in rec])
    return TraceData(algo, header, rows)


def traces_equal_ignoring_wall(a: TraceData, b: TraceData) -> bool:
    """Exact equality of every recorded value except the wall_ms column."""
    if a.algo != b.algo or a.columns != b.columns or len(a.rows) != len(b.rows):
        return False
    skip = a.columns.index("wall_ms")
    for ra, rb in zip(a.rows, b.rows):
        for k, (va, vb) in enumerate(zip(ra, rb)):
            if k != skip and va != vb:
                return False
    return True
