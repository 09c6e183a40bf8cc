"""Cross-subject aggregation and table rendering.

Aggregates a per-recording feature over subjects into a 9 task x 5 session
grid, then renders three artifacts:

* table1 - per (session, task) standard deviation of mean pressure,
  5 session rows x 9 task columns;
* table2 - pairwise session p-values, 9 task rows x 10 pair columns, with
  cells below the significance threshold flagged;
* figure data - long-form (task, session, mean, std, n) rows, one per cell,
  plus the mean's ratio against session 1 of the same task.

CSV output is RFC-4180 style with a header row and LF endings; table1 cells
are rounded to integers and table2 cells to three decimals for display.
The JSON renderings carry full precision and a ``schema_version`` field.
Renderers never aggregate on their own: every number they emit is
recomputable from the ``values`` list of the underlying cell.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .data import Dataset, Recording, SESSIONS, TASKS
from .features import mean_pressure, saturation_ratio
from .stats import SESSION_PAIRS, TestResult

SCHEMA_VERSION = 1

FeatureName = Literal["saturation_ratio", "mean_pressure"]
FEATURES = ("saturation_ratio", "mean_pressure")


@dataclass(frozen=True)
class SessionTaskSummary:
    """Cross-subject aggregate of one (task, session) cell.

    ``std`` is the sample standard deviation (n-1 denominator), undefined
    below two values; ``mean`` is undefined for an empty cell.
    """

    task_id: int
    session_id: int
    values: tuple[float, ...]
    n: int
    mean: float | None
    std: float | None

    @classmethod
    def from_values(cls, task_id: int, session_id: int, values) -> "SessionTaskSummary":
        values = tuple(float(v) for v in values)
        n = len(values)
        mean = float(np.mean(values)) if n >= 1 else None
        std = float(np.std(values, ddof=1)) if n >= 2 else None
        return cls(task_id=task_id, session_id=session_id, values=values,
                   n=n, mean=mean, std=std)


@dataclass(frozen=True)
class FeatureGrid:
    """All 45 (task, session) summaries for one feature."""

    feature: FeatureName
    cells: dict[tuple[int, int], SessionTaskSummary]

    def cell(self, task_id: int, session_id: int) -> SessionTaskSummary:
        return self.cells[(task_id, session_id)]

    def values_by_cell(self) -> dict[tuple[int, int], tuple[float, ...]]:
        return {key: summary.values for key, summary in self.cells.items()}


def recording_feature(recording: Recording, feature: FeatureName) -> float:
    """The per-recording scalar that gets aggregated across subjects."""
    if feature == "saturation_ratio":
        return saturation_ratio(recording.pressure, recording.device.max_level)
    if feature == "mean_pressure":
        return mean_pressure(recording.pressure)
    raise ValueError(f"unknown feature {feature!r}, expected one of {FEATURES}")


def aggregate(dataset: Dataset, feature: FeatureName) -> FeatureGrid:
    """Collect the feature per (task, session) over all subjects present.

    Values are ordered by subject id.  Cells with no recordings yield n = 0
    summaries; a session a subject skipped is simply absent from that cell.
    """
    if len(dataset) == 0:
        raise ValueError("cannot aggregate an empty dataset")
    collected: dict[tuple[int, int], list[float]] = {
        (task, session): [] for task in TASKS for session in SESSIONS}
    for key in dataset.keys():
        subject_id, session_id, task_id = key
        recording = dataset.get(*key)
        collected[(task_id, session_id)].append(recording_feature(recording, feature))
    cells = {key: SessionTaskSummary.from_values(key[0], key[1], values)
             for key, values in collected.items()}
    return FeatureGrid(feature=feature, cells=cells)


def _csv_text(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _fmt_full(value: float | None) -> str:
    return "" if value is None else repr(value)


def render_table1_csv(grid: FeatureGrid) -> str:
    """Std of mean pressure as 5 session rows x 9 task columns.

    Cells are rounded to whole device levels; a cell with fewer than two
    subjects is left empty.
    """
    rows = [["session"] + [f"T{t}" for t in TASKS]]
    for session in SESSIONS:
        row = [str(session)]
        for task in TASKS:
            std = grid.cell(task, session).std
            row.append("" if std is None else str(round(std)))
        rows.append(row)
    return _csv_text(rows)


def render_table1_json(grid: FeatureGrid) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "artifact": "table1",
        "feature": grid.feature,
        "rows": [
            {
                "session": session,
                "std": {f"T{t}": grid.cell(t, session).std for t in TASKS},
                "n": {f"T{t}": grid.cell(t, session).n for t in TASKS},
            }
            for session in SESSIONS
        ],
    }


def _pair_labels() -> list[str]:
    return [f"S{a}-S{b}" for a, b in SESSION_PAIRS]


def render_table2_csv(results: list[TestResult], alpha: float = 0.05) -> str:
    """Pairwise p-values as 9 task rows x 10 session-pair columns.

    p-values are shown to three decimals; the trailing ``significant``
    column lists the pair labels with p below ``alpha``.  Pairs without a
    result are left empty.
    """
    by_cell = {(r.task_id, r.session_a, r.session_b): r for r in results}
    rows = [["task"] + _pair_labels() + ["significant"]]
    for task in TASKS:
        row = [str(task)]
        flagged = []
        for a, b in SESSION_PAIRS:
            r = by_cell.get((task, a, b))
            if r is None:
                row.append("")
                continue
            row.append(f"{r.p_value:.3f}")
            if r.p_value < alpha:
                flagged.append(r.pair_label)
        row.append(";".join(flagged))
        rows.append(row)
    return _csv_text(rows)


def render_table2_json(results: list[TestResult], alpha: float = 0.05) -> dict:
    by_cell = {(r.task_id, r.session_a, r.session_b): r for r in results}
    out_rows = []
    for task in TASKS:
        cells = {}
        for a, b in SESSION_PAIRS:
            r = by_cell.get((task, a, b))
            if r is None:
                cells[f"S{a}-S{b}"] = None
                continue
            cells[f"S{a}-S{b}"] = {
                "p_value": r.p_value,
                "significant": r.p_value < alpha,
                "rank_sum": r.rank_sum,
                "method": r.method,
                "n_a": r.n_a,
                "n_b": r.n_b,
            }
        out_rows.append({"task": task, "cells": cells})
    return {
        "schema_version": SCHEMA_VERSION,
        "artifact": "table2",
        "alpha": alpha,
        "pairs": _pair_labels(),
        "rows": out_rows,
    }


def _ratio_vs_s1(grid: FeatureGrid, task: int, session: int) -> float | None:
    mean = grid.cell(task, session).mean
    baseline = grid.cell(task, 1).mean
    if mean is None or baseline is None or baseline == 0.0:
        return None
    return mean / baseline


def render_fig_data_csv(grid: FeatureGrid) -> str:
    """Long-form plot data: 45 rows (task-major), full-precision floats.

    ``ratio_vs_s1`` compares each session's mean against session 1 of the
    same task, the quickest way to spot a fatigue-session increase.
    """
    rows = [["task", "session", "mean", "std", "n", "ratio_vs_s1"]]
    for task in TASKS:
        for session in SESSIONS:
            cell = grid.cell(task, session)
            rows.append([
                str(task), str(session),
                _fmt_full(cell.mean), _fmt_full(cell.std), str(cell.n),
                _fmt_full(_ratio_vs_s1(grid, task, session)),
            ])
    return _csv_text(rows)


def render_fig_data_json(grid: FeatureGrid) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "artifact": "figure_data",
        "feature": grid.feature,
        "rows": [
            {
                "task": task,
                "session": session,
                "mean": grid.cell(task, session).mean,
                "std": grid.cell(task, session).std,
                "n": grid.cell(task, session).n,
                "ratio_vs_s1": _ratio_vs_s1(grid, task, session),
            }
            for task in TASKS
            for session in SESSIONS
        ],
    }
