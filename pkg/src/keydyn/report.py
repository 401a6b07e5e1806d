"""Evaluation report assembly: 13 algorithms x 3 datasets.

Text rendering marks the per-column minimum with ``*`` and flags cells
whose model did not converge with ``!``; the CSV form is
algorithm,dataset,eer_percent,impostor_error_percent.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

from keydyn.algorithms import ALGORITHM_ORDER, ALGORITHMS

DATASET_ORDER = ("turkish", "password", "concat")


@dataclass(frozen=True)
class ResultCell:
    algorithm: str
    dataset: str
    eer_percent: float | None
    impostor_error_percent: float | None = None
    converged: bool = True
    failed: str | None = None  # error text when no number could be produced


def _column_min(cells: list[ResultCell], dataset: str, attr: str) -> float | None:
    vals = [
        getattr(c, attr)
        for c in cells
        if c.dataset == dataset and getattr(c, attr) is not None
    ]
    return min(vals) if vals else None


def _fmt(cell: ResultCell, attr: str, col_min: float | None) -> str:
    value = getattr(cell, attr)
    if value is None:
        return "!"
    text = f"{value:.1f}"
    if not cell.converged:
        text = "!" + text
    if col_min is not None and value == col_min:
        text += "*"
    return text


def render_text(cells: list[ResultCell], impostor_mode: bool = False) -> str:
    datasets = [d for d in DATASET_ORDER if any(c.dataset == d for c in cells)]
    algos = [a for a in ALGORITHM_ORDER if any(c.algorithm == a for c in cells)]
    by_key = {(c.algorithm, c.dataset): c for c in cells}

    headers = ["Algorithm"]
    for d in datasets:
        headers.append(f"{d} EER%")
        if impostor_mode:
            headers.append(f"{d} Imp.Err%")

    rows = []
    for a in algos:
        row = [ALGORITHMS[a].display_name]
        for d in datasets:
            cell = by_key.get((a, d))
            if cell is None:
                row.append("-")
                if impostor_mode:
                    row.append("-")
                continue
            row.append(_fmt(cell, "eer_percent", _column_min(cells, d, "eer_percent")))
            if impostor_mode:
                row.append(
                    _fmt(
                        cell,
                        "impostor_error_percent",
                        _column_min(cells, d, "impostor_error_percent"),
                    )
                )
        rows.append(row)

    widths = [
        max(len(headers[i]), *(len(r[i]) for r in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    out = io.StringIO()
    out.write("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip() + "\n")
    out.write("  ".join("-" * w for w in widths) + "\n")
    for r in rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    return out.getvalue()


def render_csv(cells: list[ResultCell]) -> str:
    out = io.StringIO()
    out.write("algorithm,dataset,eer_percent,impostor_error_percent\n")
    ordered = sorted(
        cells,
        key=lambda c: (ALGORITHM_ORDER.index(c.algorithm), DATASET_ORDER.index(c.dataset)),
    )
    for c in ordered:
        eer = "" if c.eer_percent is None else f"{c.eer_percent:.4f}"
        imp = (
            ""
            if c.impostor_error_percent is None
            else f"{c.impostor_error_percent:.4f}"
        )
        out.write(f"{c.algorithm},{c.dataset},{eer},{imp}\n")
    return out.getvalue()
