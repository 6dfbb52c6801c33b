"""Report tables rendered as CSV or markdown with fixed precision."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

PRECISION = 3


def fmt(value, precision: int = PRECISION) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return f"{value:.{precision}f}"
    return "" if value is None else str(value)


@dataclass
class ReportTable:
    title: str
    columns: list
    rows: list = field(default_factory=list)
    footnotes: list = field(default_factory=list)
    # Per-column precision overrides, e.g. {"p": 4}.
    precision: dict = field(default_factory=dict)

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValueError(f"row {i} has {len(row)} cells, expected {len(self.columns)}")

    def add(self, *cells) -> None:
        if len(cells) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} cells, got {len(cells)}")
        self.rows.append(list(cells))

    def rendered_rows(self) -> list[list[str]]:
        prec = [self.precision.get(c, PRECISION) for c in self.columns]
        return [[fmt(v, p) for v, p in zip(row, prec)] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.columns)
        w.writerows(self.rendered_rows())
        return buf.getvalue()

    def to_markdown(self) -> str:
        def cell(s):
            return s.replace("|", "\\|").replace("\n", " ")

        lines = [f"### {self.title}", "", "| " + " | ".join(cell(c) for c in self.columns) + " |"]
        lines.append("|" + "|".join("---" for _ in self.columns) + "|")
        for row in self.rendered_rows():
            lines.append("| " + " | ".join(cell(c) for c in row) + " |")
        if self.footnotes:
            lines.append("")
            lines.extend(self.footnotes)
        return "\n".join(lines) + "\n"


def _slug(title: str) -> str:
    keep = "".join(ch.lower() if ch.isalnum() else "_" for ch in title)
    return "_".join(filter(None, keep.split("_"))) or "table"


def emit_report(tables, format: str = "markdown", out_path=None):
    """Write tables and return the paths written.

    markdown: all tables in one file at ``out_path``.
    csv: one file per table. ``out_path`` is a directory, or a file path when
    there is exactly one table.
    """
    tables = list(tables)
    if format not in ("csv", "markdown"):
        raise ValueError("format must be 'csv' or 'markdown'")
    out = Path(out_path)
    if format == "markdown":
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes("\n".join(t.to_markdown() for t in tables).encode("utf-8"))
        return [out]
    if len(tables) == 1 and out.suffix == ".csv":
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(tables[0].to_csv().encode("utf-8"))
        return [out]
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for t in tables:
        p = out / f"{_slug(t.title)}.csv"
        p.write_bytes(t.to_csv().encode("utf-8"))
        paths.append(p)
    return paths


def phc_table(rows, title: str = "PHC") -> ReportTable:
    """rows: iterable of PHCResult, or (label, signal, PHCResult) triples."""
    t = ReportTable(title, ["stratum", "signal", "N", "PHC", "p", "stars"], precision={"p": 4})
    for r in rows:
        label, signal, res = r if isinstance(r, tuple) else (r.stratum, "", r)
        t.add(label, signal, res.N, res.auc, res.p_value, res.stars)
    return t
