"""Triaxial activity windows and their fixed-length feature vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, InsufficientDataError, TooShortWindowError
from .model import TimeSeries
from .period import estimate_period
from .validation import median_spacing

__all__ = [
    "ACTIVITY_LABELS",
    "UNKNOWN_LABEL",
    "AXES",
    "ActivityWindow",
    "extract_features",
    "segment_starts",
    "FEATURES_PER_AXIS",
]

ACTIVITY_LABELS = (
    "walking",
    "running",
    "standing_up",
    "sitting_down",
    "lying_down",
    "jumping",
)
UNKNOWN_LABEL = "unknown"
AXES = ("x", "y", "z")

# per axis: mean, std, min, max, dominant period, peak-to-peak, mean |slope|
FEATURES_PER_AXIS = 7


@dataclass(frozen=True)
class ActivityWindow:
    """One decision window: three axis series on an identical time grid."""

    label: str
    x: TimeSeries
    y: TimeSeries
    z: TimeSeries

    def __post_init__(self):
        if self.label not in ACTIVITY_LABELS and self.label != UNKNOWN_LABEL:
            raise DataError(f"unknown activity label {self.label!r}")
        n = len(self.x)
        if len(self.y) != n or len(self.z) != n:
            raise DataError("all three axes must have the same length")
        if not (
            np.array_equal(self.x.t, self.y.t) and np.array_equal(self.x.t, self.z.t)
        ):
            raise DataError("all three axes must share the same time grid")

    @property
    def axes(self) -> dict:
        return {"x": self.x, "y": self.y, "z": self.z}

    @property
    def t(self) -> np.ndarray:
        return self.x.t

    def __len__(self):
        return len(self.x)


def _axis_features(series: TimeSeries) -> list:
    t, y = series.t, series.y
    dt = median_spacing(t)
    n = len(y)
    p_min, p_max = 2.0 * dt, (n * dt) / 2.0
    period = estimate_period(t, y, p_min, p_max).period
    slopes = np.abs(np.diff(y) / np.diff(t))
    return [
        float(np.mean(y)),
        float(np.std(y)),
        float(np.min(y)),
        float(np.max(y)),
        float(period),
        float(np.max(y) - np.min(y)),
        float(np.mean(slopes)),
    ]


def extract_features(w: ActivityWindow) -> np.ndarray:
    """21-element vector: the per-axis summary of x, then y, then z.

    All features depend only on values and spacing, never on the absolute
    time offset, so re-windowed copies of the same samples score alike.
    """
    if len(w) < 4:
        raise TooShortWindowError(f"window needs at least 4 samples, got {len(w)}")
    feats = []
    for axis in AXES:
        feats.extend(_axis_features(w.axes[axis]))
    return np.asarray(feats)


def segment_starts(n: int, window: int, min_count: int = 5) -> np.ndarray:
    """Start indices tiling n samples into windows for novelty training.

    Non-overlapping tiles when at least `min_count` fit; otherwise exactly
    `min_count` evenly spaced (overlapping) starts.
    """
    if window > n:
        raise InsufficientDataError(f"window {window} exceeds series length {n}")
    n_tiles = n // window
    if n_tiles >= min_count:
        return np.arange(n_tiles) * window
    return np.unique(np.linspace(0, n - window, min_count).round().astype(int))
