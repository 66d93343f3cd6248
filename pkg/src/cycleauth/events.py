"""Fixed-effect event windows.

In this system events do not model holidays: they register sensor
singularities, short stretches where the recorded signal deviates by a
roughly constant amount.  Each window carries one additive effect.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DataError

__all__ = ["EventTerm", "eval_events"]


@dataclass(frozen=True)
class EventTerm:
    """Non-overlapping (start, end, effect) windows; effect units match y."""

    windows: tuple = field(default_factory=tuple)

    def __post_init__(self):
        normalized = tuple(
            (float(a), float(b), float(k)) for a, b, k in self.windows
        )
        object.__setattr__(self, "windows", normalized)
        prev_end = None
        for start, end, _ in sorted(normalized):
            if start > end:
                raise DataError(f"event window start {start} exceeds end {end}")
            if prev_end is not None and start <= prev_end:
                raise DataError("event windows must not overlap")
            prev_end = end

    def __len__(self):
        return len(self.windows)


def eval_events(e: EventTerm, t) -> np.ndarray:
    """Sum of window effects covering t (inclusive bounds); 0 outside all windows."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(len(t_arr))
    for start, end, effect in e.windows:
        out += np.where((t_arr >= start) & (t_arr <= end), effect, 0.0)
    return out if np.ndim(t) else float(out[0])
