"""
Report writers: summary CSV, full JSON and plot-data CSV
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Union

import pandas as pd

from .experiment import CellResult, ExperimentReport
from .exceptions import ConfigurationError, ReportWriteError

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json", "plot")

SUMMARY_COLUMNS = [
    "distribution", "v", "model", "c", "N", "kernel", "activation", "criterion",
    "correct_ratio_pct", "slack_mean", "slack_std", "T", "seed",
    "mean_s1", "mean_s2", "mean_s3",
]

PLOT_AXES = ("variance", "samples", "coef")


def _summary_row(result: CellResult) -> Dict[str, Any]:
    cell = result.cell
    row = {
        "distribution": cell.distribution,
        "v": cell.variance,
        "model": cell.model,
        "c": cell.coef,
        "N": cell.samples,
        "kernel": cell.kernel.kernel,
        "activation": cell.kernel.activation,
        "criterion": cell.estimator.criterion,
        "correct_ratio_pct": result.correct_ratio,
        "slack_mean": result.slack_mean,
        "slack_std": result.slack_std,
        "T": result.trials,
        "seed": cell.seed,
    }
    row.update(result.mean_scores())
    return row


def summary_frame(report: ExperimentReport) -> pd.DataFrame:
    """One row per cell"""
    return pd.DataFrame([_summary_row(r) for r in report.cells], columns=SUMMARY_COLUMNS)


def plot_axis(report: ExperimentReport) -> str:
    """First of variance / samples / coef that takes more than one value"""
    grids = {
        "variance": {r.cell.variance for r in report.cells},
        "samples": {r.cell.samples for r in report.cells},
        "coef": {r.cell.coef for r in report.cells},
    }
    for axis in PLOT_AXES:
        if len(grids[axis]) > 1:
            return axis
    return "samples"


def plot_frame(report: ExperimentReport) -> pd.DataFrame:
    """Long-format series keyed by the sweep axis, ready for external plotting"""
    axis = plot_axis(report)
    rows = []
    for r in report.cells:
        cell = r.cell
        rows.append({
            "axis": axis,
            "axis_value": getattr(cell, axis),
            "series": cell.kernel_label,
            "distribution": cell.distribution,
            "variance": cell.variance,
            "model": cell.model,
            "coef": cell.coef,
            "samples": cell.samples,
            "criterion": cell.estimator.criterion,
            "correct_ratio_pct": r.correct_ratio,
            "slack_mean": r.slack_mean,
            "slack_std": r.slack_std,
        })
    frame = pd.DataFrame(rows)
    return frame.sort_values(["series", "distribution", "model", "criterion", "axis_value"],
                             kind="mergesort").reset_index(drop=True)


def report_to_dict(report: ExperimentReport) -> Dict[str, Any]:
    cells = []
    for r in report.cells:
        cells.append({
            "coordinates": r.cell.coordinates(),
            "correct_ratio_pct": r.correct_ratio,
            "slack_mean": r.slack_mean,
            "slack_std": r.slack_std,
            "trials": r.trials,
            "records": [rec.to_dict() for rec in r.records],
        })
    return {
        "name": report.name,
        "started_at": report.started_at.isoformat() if report.started_at else None,
        "duration_seconds": report.duration_seconds,
        "config": report.config,
        "cells": cells,
    }


def load_report_json(path: Union[str, Path]) -> Dict[str, Any]:
    with open(path, "r") as f:
        return json.load(f)


def _write(path: Path, writer) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        writer(path)
    except OSError as e:
        raise ReportWriteError(path, e) from e
    logger.info(f"Wrote {path}")


def emit_report(report: ExperimentReport, out_dir: Union[str, Path],
                formats: Iterable[str] = FORMATS) -> Dict[str, Path]:
    """
    Write the report files

    Args:
        report: Completed sweep
        out_dir: Directory for <name>_summary.csv, <name>.json, <name>_plot.csv
        formats: Any of "csv", "json", "plot"

    Returns:
        Mapping format -> written path
    """
    formats: List[str] = list(formats)
    unknown = set(formats) - set(FORMATS)
    if unknown:
        raise ConfigurationError(f"Unknown report formats: {sorted(unknown)}")

    out_dir = Path(out_dir)
    written = {}

    if "csv" in formats:
        path = out_dir / f"{report.name}_summary.csv"
        frame = summary_frame(report)
        _write(path, lambda p: frame.to_csv(p, index=False))
        written["csv"] = path

    if "json" in formats:
        path = out_dir / f"{report.name}.json"
        body = report_to_dict(report)

        def dump(p):
            with open(p, "w") as f:
                json.dump(body, f, indent=2)

        _write(path, dump)
        written["json"] = path

    if "plot" in formats:
        path = out_dir / f"{report.name}_plot.csv"
        frame = plot_frame(report)
        _write(path, lambda p: frame.to_csv(p, index=False))
        written["plot"] = path

    return written
