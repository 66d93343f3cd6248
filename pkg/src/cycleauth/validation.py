"""Input validation helpers used by the estimator-facing API."""

from __future__ import annotations

import numpy as np

from .exceptions import DataError


def as_float_array(values, name: str = "array") -> np.ndarray:
    """Coerce to a contiguous 1-D float64 array, rejecting non-finite entries."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return np.ascontiguousarray(arr)


def check_series(t, y, min_length: int = 2):
    """Validate an ordered (t, y) pair and return float64 copies.

    t must be strictly increasing; both must be finite and equally long.
    """
    t = as_float_array(t, "t")
    y = as_float_array(y, "y")
    if len(t) != len(y):
        raise DataError(f"t and y lengths differ: {len(t)} vs {len(y)}")
    if len(t) < min_length:
        raise DataError(f"series needs at least {min_length} samples, got {len(t)}")
    if len(t) > 1 and not np.all(np.diff(t) > 0):
        raise DataError("t must be strictly increasing")
    return t, y


def check_in_unit_interval(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise DataError(f"{name} must lie strictly in (0, 1), got {value}")
    return value


def median_spacing(t: np.ndarray) -> float:
    """Typical sample spacing of a (possibly gapped) time grid."""
    if len(t) < 2:
        return 1.0
    return float(np.median(np.diff(t)))
