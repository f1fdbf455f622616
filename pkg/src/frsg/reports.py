"""CSV emission for sweep reports and energy series.

Report tables carry the row label in the first column followed by one
error/order column pair per ladder rung.  Errors print with 5 significant
digits (``2.5566e-02``), orders with 4 decimals, failed cells as ``FAIL``
and undefined orders as ``-``.  Cells the table highlights (the ladder
diagonal) carry a trailing ``*``; strip it before re-parsing numbers.
A sibling ``<name>.meta.json`` holds the full provenance, including
anything non-deterministic such as wall time, so reruns with a warm cache
give byte-identical CSVs.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .experiments import ConvergenceReport
from .observables import EnergySample


def _fmt_error(value: float, failed: bool, marked: bool) -> str:
    if failed:
        return "FAIL"
    if not math.isfinite(value):
        return "-"
    text = f"{value:.4e}"
    return text + "*" if marked else text


def _fmt_order(value: float) -> str:
    if not math.isfinite(value):
        return "-"
    return f"{value:.4f}"


def write_report_csv(report: ConvergenceReport, csv_path: str | Path) -> Path:
    """Write one report table plus its sibling meta.json; returns the CSV path."""
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    header = ["label"]
    for col in report.col_labels:
        header += [f"error({col})", f"order({col})"]
    lines.append(",".join(header))
    if report.col_labels:
        for i, row_label in enumerate(report.row_labels):
            cells = [row_label]
            for j in range(len(report.col_labels)):
                marked = bool(report.diagonal[i, j]) if report.diagonal is not None else False
                cells.append(_fmt_error(float(report.errors[i, j]), bool(report.failed[i, j]), marked))
                cells.append(_fmt_order(float(report.orders[i, j])))
            lines.append(",".join(cells))
    csv_path.write_text("\n".join(lines) + "\n")

    meta = {
        "kind": report.kind,
        "row_labels": list(report.row_labels),
        "col_labels": list(report.col_labels),
        "ladder_ratio": report.ladder_ratio,
        "metadata": report.metadata,
        "failed_cells": [
            [str(report.row_labels[i]), str(report.col_labels[j])]
            for i, j in zip(*np.nonzero(report.failed))
        ],
        "extra": {
            key: (value.tolist() if isinstance(value, np.ndarray) else value)
            for key, value in report.extra.items()
        },
    }
    if report.diagonal is not None:
        meta["diagonal"] = report.diagonal.tolist()
    meta_path = csv_path.with_name(csv_path.stem + ".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True))
    return csv_path


def write_energy_csv(samples: Sequence[EnergySample], path: str | Path) -> Path:
    """Energy drift series as step,time,energy,drift rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["step,time,energy,drift"]
    for s in samples:
        lines.append(f"{s.step_index},{s.time:.10g},{s.value:.10e},{s.drift:.10e}")
    path.write_text("\n".join(lines) + "\n")
    return path


def read_report_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Parse a report CSV back into header and raw string cells."""
    lines = Path(path).read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows
