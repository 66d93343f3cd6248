"""Forecast error metrics and the rolling cross-validation harness."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataio import CvSplit, Recording, apply_zscore, zscore_stats
from .exceptions import DataError
from .fitting import FitConfig, fit
from .model import PredictionBand, TimeSeries, predict

__all__ = ["MetricReport", "metrics", "run_cv", "cv_rows_to_csv", "cv_summary"]

CV_CSV_HEADER = "block,axis,mse,rmse,mae,coverage"


@dataclass(frozen=True)
class MetricReport:
    mse: float
    rmse: float
    mae: float
    coverage: float
    per_block: tuple = ()


def metrics(truth: TimeSeries, band: PredictionBand) -> MetricReport:
    """Pointwise forecast errors plus the fraction of truth inside the band."""
    if len(truth) != len(band):
        raise DataError(
            f"truth has {len(truth)} samples but band has {len(band)} steps"
        )
    err = truth.y - band.yhat
    mse = float(np.mean(err**2))
    mae = float(np.mean(np.abs(err)))
    coverage = float(np.mean((band.lower <= truth.y) & (truth.y <= band.upper)))
    return MetricReport(mse=mse, rmse=float(np.sqrt(mse)), mae=mae, coverage=coverage)


def _block_seed(seed: int, axis_index: int, block_index: int) -> int:
    return (seed * 1000003 + axis_index) * 101 + block_index


def run_cv(
    rec: Recording,
    split: CvSplit,
    fit_config: FitConfig = FitConfig(auto_period=True),
    level: float = 0.8,
    n_sims: int = 1000,
    seed: int = 0,
) -> list[dict]:
    """Rolling-origin evaluation of one recording, per axis.

    Each axis is z-scored with statistics from the initial training range
    only.  For block j the model is fitted on everything before the block
    (the truth of earlier blocks is folded back into training), then scored
    on the block.  Returns rows of
    {block, axis, mse, rmse, mae, coverage}, deterministic for a fixed seed.
    """
    t_all = rec.t
    train_end = split.train_range[1]
    rows = []
    for axis_index, axis in enumerate(("x", "y", "z")):
        values = rec.axis(axis)
        stats = zscore_stats(values[split.train_range[0] : train_end])
        z = apply_zscore(values, stats)
        for block_index, (start, end) in enumerate(split.test_blocks):
            model = fit(TimeSeries(t=t_all[:start], y=z[:start]), fit_config)
            band = predict(
                model,
                horizon=end - start,
                level=level,
                n_sims=n_sims,
                seed=_block_seed(seed, axis_index, block_index),
            )
            truth = TimeSeries(t=t_all[start:end], y=z[start:end])
            report = metrics(truth, band)
            rows.append(
                {
                    "block": block_index,
                    "axis": axis,
                    "mse": report.mse,
                    "rmse": report.rmse,
                    "mae": report.mae,
                    "coverage": report.coverage,
                }
            )
    return rows


def cv_rows_to_csv(rows) -> str:
    lines = [CV_CSV_HEADER]
    for row in rows:
        lines.append(
            f"{row['block']},{row['axis']},{row['mse']:.9g},{row['rmse']:.9g},"
            f"{row['mae']:.9g},{row['coverage']:.9g}"
        )
    return "\n".join(lines) + "\n"


def cv_summary(rows) -> dict:
    """Per-axis mean metrics across blocks."""
    axes = sorted({row["axis"] for row in rows})
    summary = {}
    for axis in axes:
        axis_rows = [r for r in rows if r["axis"] == axis]
        summary[axis] = {
            key: float(np.mean([r[key] for r in axis_rows]))
            for key in ("mse", "rmse", "mae", "coverage")
        }
    return summary


def summary_to_json(summary: dict, extra: dict | None = None) -> str:
    doc = dict(extra or {})
    doc["per_axis"] = summary
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
