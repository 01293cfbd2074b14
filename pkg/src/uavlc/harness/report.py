"""Metric tables: deterministic CSV serialization and the summary digest.

The CSV column order is fixed and documented here; floats are written with
17 significant digits so repeated runs of a seeded experiment produce
byte-identical files.  Wall times are deliberately not serialized — they
are the one field that cannot be deterministic.
"""

from __future__ import annotations

import csv
import os

from .pipeline import MetricsRow

CSV_COLUMNS = (
    "experiment_id",
    "variant",
    "sweep_var",
    "sweep_value",
    "power_planned_w",
    "power_scored_w",
    "predictor_mse",
    "outer_iterations",
    "status",
)

# Baselines the summary compares the proposed scheme against, in print order.
_SUMMARY_BASELINES = ("center", "assoc-only", "placement-only", "persistence")


class MetricsFileError(ValueError):
    """A metrics CSV is missing, malformed, or has the wrong columns."""


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_metrics(rows, path) -> None:
    """Write rows as CSV in the fixed column order."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([
                row.experiment_id,
                row.variant,
                row.sweep_var,
                _fmt(row.sweep_value),
                _fmt(row.power_planned),
                _fmt(row.power_scored),
                _fmt(row.mse),
                str(row.outer_iterations),
                row.status,
            ])


def load_metrics(path) -> list:
    """Parse a metrics CSV back into rows (wall times come back as zero)."""
    try:
        with open(path, "r", encoding="ascii", newline="") as fh:
            records = list(csv.reader(fh))
    except OSError as exc:
        raise MetricsFileError(f"cannot read metrics file {path!r}: {exc}") from exc
    if not records or tuple(records[0]) != CSV_COLUMNS:
        raise MetricsFileError(f"{path!r} is not a metrics CSV (bad header)")
    rows = []
    for lineno, record in enumerate(records[1:], start=2):
        if len(record) != len(CSV_COLUMNS):
            raise MetricsFileError(f"{path}:{lineno}: expected {len(CSV_COLUMNS)} fields")
        try:
            rows.append(MetricsRow(
                experiment_id=record[0],
                variant=record[1],
                sweep_var=record[2],
                sweep_value=float(record[3]),
                power_planned=float(record[4]),
                power_scored=float(record[5]),
                mse=float(record[6]),
                outer_iterations=int(record[7]),
                status=record[8],
            ))
        except ValueError as exc:
            raise MetricsFileError(f"{path}:{lineno}: {exc}") from exc
    return rows


def _summary_lines(rows) -> list:
    """Proposed-vs-baseline reductions per sweep point, deterministic order."""
    groups = {}
    order = []
    for row in rows:
        if row.status != "ok":
            continue
        key = (row.experiment_id, row.sweep_var, row.sweep_value)
        if key not in groups:
            groups[key] = {}
            order.append(key)
        groups[key][row.variant] = row

    lines = []
    for key in order:
        experiment_id, sweep_var, sweep_value = key
        label = f"{sweep_var}={sweep_value:g}" if sweep_var else experiment_id
        members = groups[key]
        proposed = members.get("proposed")
        if proposed is None:
            continue
        parts = [f"{label}: proposed {_fmt(proposed.power_scored)} W"]
        for name in _SUMMARY_BASELINES:
            base = members.get(name)
            if base is None or base.power_scored <= 0.0:
                continue
            cut = (base.power_scored - proposed.power_scored) / base.power_scored
            parts.append(f"vs {name} {_fmt(base.power_scored)} W: {100.0 * cut:.1f}%")
        lines.append(" | ".join(parts))
    return lines


def report(rows, out_dir, name: str = "metrics") -> dict:
    """Write ``<name>.csv`` and ``<name>_summary.txt``; returns their paths."""
    rows = list(rows)
    if not rows:
        raise ValueError("no metrics rows to report")
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{name}.csv")
    summary_path = os.path.join(out_dir, f"{name}_summary.txt")
    write_metrics(rows, csv_path)
    with open(summary_path, "w", encoding="ascii") as fh:
        lines = _summary_lines(rows)
        fh.write("\n".join(lines) + ("\n" if lines else ""))
    return {"csv": csv_path, "summary": summary_path}
