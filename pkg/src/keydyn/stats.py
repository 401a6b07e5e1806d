"""Per-group total typing time summaries (boxplot-style).

Quartiles use linear interpolation between closest ranks (numpy's
default), whiskers extend to the farthest point within 1.5 IQR of the
box, everything beyond is an outlier.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from keydyn.dataset import Dataset


class EmptyDatasetError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSummary:
    age_group: str
    count: int
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]


def five_number_summary(values: list[int] | np.ndarray, age_group: str = "") -> GroupSummary:
    if len(values) == 0:
        raise EmptyDatasetError("empty_group")
    arr = np.asarray(values, dtype=float)
    q1, med, q3 = np.quantile(arr, [0.25, 0.5, 0.75])
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    inside = arr[(arr >= lo_fence) & (arr <= hi_fence)]
    outliers = arr[(arr < lo_fence) | (arr > hi_fence)]
    return GroupSummary(
        age_group=age_group,
        count=len(arr),
        minimum=float(arr.min()),
        q1=float(q1),
        median=float(med),
        q3=float(q3),
        maximum=float(arr.max()),
        whisker_low=float(inside.min()),
        whisker_high=float(inside.max()),
        outliers=tuple(sorted(float(v) for v in outliers)),
    )


def dataset_stats(d: Dataset) -> list[GroupSummary]:
    """Total-typing-time summary per age group, suitable for plotting."""
    if not d.samples:
        raise EmptyDatasetError("empty dataset")
    groups: dict[str, list[int]] = {}
    for s in d.samples:
        groups.setdefault(s.meta.age_group, []).append(s.features.total_time_us())
    return [
        five_number_summary(vals, age_group=group)
        for group, vals in sorted(groups.items())
    ]


def stats_csv(summaries: list[GroupSummary]) -> str:
    out = io.StringIO()
    out.write(
        "age_group,count,min,q1,median,q3,max,whisker_low,whisker_high,n_outliers\n"
    )
    for s in summaries:
        out.write(
            f"{s.age_group},{s.count},{s.minimum:.0f},{s.q1:.1f},{s.median:.1f},"
            f"{s.q3:.1f},{s.maximum:.0f},{s.whisker_low:.0f},{s.whisker_high:.0f},"
            f"{len(s.outliers)}\n"
        )
    return out.getvalue()
