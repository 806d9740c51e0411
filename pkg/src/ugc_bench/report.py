"""Result tables rendered to markdown, CSV and JSON with pinned rounding.

Ratio cells print as "0.75 (27.7)": the noisy/normalized ratio to 2 decimal
places with the noisy score to 1 in parentheses, plus the CI half-width when
one was computed. Count cells print with thousands separators. Divergence
tables round KL to 3 decimals and OOV percentage and perplexity to 2. The
JSON rendering carries full-precision values and round-trips exactly; the
markdown and CSV renderings share cell strings, differing only in framing.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Sequence

from .corpus import CorpusStats, TypologyCode
from .lm import DivergenceReport
from .metrics import RatioReport

KIND_RATIO = "ratio"
KIND_COUNT = "count"
KIND_DIVERGENCE = "divergence"

_DIVERGENCE_ROWS = ("3-gram KL-div", "%OOV", "PPL")
_DIVERGENCE_DECIMALS = {"3-gram KL-div": 3, "%OOV": 2, "PPL": 2}


@dataclass(frozen=True)
class Cell:
    """One table cell: a value, an optional parenthesized score, an optional CI."""

    value: float | None
    score: float | None = None
    ci: tuple[float, float] | None = None
    kind: str = KIND_RATIO
    decimals: int = 2

    def render(self) -> str:
        if self.value is None:
            return "n/a"
        if self.kind == KIND_COUNT:
            return f"{int(self.value):,}"
        text = f"{self.value:.{self.decimals}f}"
        if self.score is not None:
            text += f" ({self.score:.1f})"
        if self.ci is not None:
            text += f" ±{(self.ci[1] - self.ci[0]) / 2:.3f}"
        return text

    def to_dict(self) -> dict:
        return {"value": self.value, "score": self.score,
                "ci": list(self.ci) if self.ci else None,
                "kind": self.kind, "decimals": self.decimals}

    @classmethod
    def from_dict(cls, obj: dict) -> "Cell":
        ci = obj.get("ci")
        return cls(value=obj["value"], score=obj.get("score"),
                   ci=tuple(ci) if ci else None,
                   kind=obj.get("kind", KIND_RATIO), decimals=obj.get("decimals", 2))


@dataclass(frozen=True)
class ReportTable:
    title: str
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: tuple[tuple[Cell, ...], ...]

    def __post_init__(self):
        if len(self.cells) != len(self.row_labels):
            raise ValueError(f"{len(self.row_labels)} row labels but {len(self.cells)} cell rows")
        for i, row in enumerate(self.cells):
            if len(row) != len(self.col_labels):
                raise ValueError(f"row {i} has {len(row)} cells for {len(self.col_labels)} columns")


def _ratio_cell(report: RatioReport) -> Cell:
    ci = None
    if report.ci is not None:
        ci = (report.ci.lower, report.ci.upper)
    value = None if report.undefined else report.ratio
    score = None if report.undefined else report.noisy.value
    return Cell(value=value, score=score, ci=ci, kind=KIND_RATIO)


def ratio_table(title: str, row_labels: Sequence[str], col_labels: Sequence[str],
                grid: Sequence[Sequence[RatioReport]]) -> ReportTable:
    """Systems by conditions grid of noisy/normalized ratios."""
    cells = tuple(tuple(_ratio_cell(r) for r in row) for row in grid)
    return ReportTable(title=title, row_labels=tuple(row_labels),
                       col_labels=tuple(col_labels), cells=cells)


def per_n_table(title: str, row_labels: Sequence[str], col_labels: Sequence[str],
                grid: Sequence[Sequence[RatioReport]], sizes: Sequence[int]) -> ReportTable:
    """Ratio table over noise-density bins, prefixed with a sentence-count row."""
    if len(sizes) != len(col_labels):
        raise ValueError(f"{len(sizes)} sizes for {len(col_labels)} columns")
    count_row = tuple(Cell(value=float(c), kind=KIND_COUNT) for c in sizes)
    base = ratio_table(title, row_labels, col_labels, grid)
    return ReportTable(title=title,
                       row_labels=("# sents.",) + base.row_labels,
                       col_labels=base.col_labels,
                       cells=(count_row,) + base.cells)


def divergence_table(title: str, reports: Sequence[DivergenceReport]) -> ReportTable:
    """Corpora as columns, the three divergence signals as rows."""
    cols = tuple(r.label for r in reports)
    rows = []
    for name in _DIVERGENCE_ROWS:
        decimals = _DIVERGENCE_DECIMALS[name]
        values = {"3-gram KL-div": [r.kl3 for r in reports],
                  "%OOV": [r.oov_pct for r in reports],
                  "PPL": [r.ppl for r in reports]}[name]
        rows.append(tuple(Cell(value=v, kind=KIND_DIVERGENCE, decimals=decimals) for v in values))
    return ReportTable(title=title, row_labels=_DIVERGENCE_ROWS, col_labels=cols,
                       cells=tuple(rows))


def distribution_data(stats: CorpusStats, mode: str = "per-code") -> list[dict]:
    """13 rows of code number, label and count, in code order."""
    if mode == "per-code":
        counts = stats.per_code_counts
    elif mode == "per-span":
        counts = stats.per_span_counts
    else:
        raise ValueError(f"unknown counting mode {mode!r}, expected 'per-code' or 'per-span'")
    return [{"code": int(c), "label": c.label, "count": counts.get(c, 0)}
            for c in TypologyCode]


def render_markdown(table: ReportTable) -> str:
    header = [table.title] + list(table.col_labels)
    lines = ["| " + " | ".join(header) + " |",
             "| " + " | ".join(["---"] * len(header)) + " |"]
    for label, row in zip(table.row_labels, table.cells):
        lines.append("| " + " | ".join([label] + [c.render() for c in row]) + " |")
    return "\n".join(lines) + "\n"


def render_csv(table: ReportTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([table.title] + list(table.col_labels))
    for label, row in zip(table.row_labels, table.cells):
        writer.writerow([label] + [c.render() for c in row])
    return buf.getvalue()


def render_json(table: ReportTable) -> str:
    payload = {
        "title": table.title,
        "rows": list(table.row_labels),
        "cols": list(table.col_labels),
        "cells": [[c.to_dict() for c in row] for row in table.cells],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def parse_json(text: str) -> ReportTable:
    """Inverse of render_json."""
    obj = json.loads(text)
    return ReportTable(
        title=obj["title"],
        row_labels=tuple(obj["rows"]),
        col_labels=tuple(obj["cols"]),
        cells=tuple(tuple(Cell.from_dict(c) for c in row) for row in obj["cells"]),
    )


def render(table: ReportTable, format: str) -> str:
    if format in ("md", "markdown"):
        return render_markdown(table)
    if format == "csv":
        return render_csv(table)
    if format == "json":
        return render_json(table)
    raise ValueError(f"unknown report format {format!r}")
