"""Synthetic triaxial activity generators for desk-scale experiments.

Each activity is a burst train on a strict periodic grid: every cycle
anchor sits at i * period plus a bounded timing jitter (shared by the
three axes, since one body produces the motion), and carries a smooth
burst-and-dip pattern whose amplitudes are drawn once per seed.  A
strictly periodic harmonic and Gaussian noise ride underneath, with axis
offsets roughly mimicking gravity split across tilted axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataio import Recording
from .features import ACTIVITY_LABELS

__all__ = ["ACTIVITY_PRESETS", "generate_recording", "generate_cycles"]


@dataclass(frozen=True)
class _Preset:
    period: float
    jitter: int
    burst_amp: tuple      # (lo, hi) of the main burst amplitude
    dip_amp: tuple        # (lo, hi) of the counter-movement dip
    harmonic_amp: tuple   # (lo, hi) of the strictly periodic harmonic
    noise: float


ACTIVITY_PRESETS = {
    "walking": _Preset(25.0, 1, (0.5, 0.7), (0.2, 0.3), (0.8, 1.0), 0.08),
    "running": _Preset(18.0, 1, (1.4, 1.8), (0.6, 0.9), (1.6, 2.0), 0.12),
    "standing_up": _Preset(60.0, 2, (1.0, 1.4), (0.5, 0.8), (0.6, 0.9), 0.08),
    "sitting_down": _Preset(60.0, 2, (0.9, 1.3), (0.6, 0.9), (0.6, 0.9), 0.08),
    "lying_down": _Preset(70.0, 2, (0.8, 1.1), (0.4, 0.7), (0.5, 0.8), 0.06),
    "jumping": _Preset(50.0, 2, (2.2, 3.0), (1.2, 1.8), (1.0, 1.4), 0.10),
}

_AXIS_OFFSETS = {"x": 9.8, "y": 0.6, "z": 0.3}
_AXIS_GAIN = {"x": 1.0, "y": 0.8, "z": 0.6}


@dataclass(frozen=True)
class _AxisPattern:
    burst: float
    dip: float
    harmonic: float
    burst_center: float   # fraction of the cycle after the anchor
    dip_center: float
    phase: float


def _axis_patterns(rng, preset: _Preset) -> dict:
    out = {}
    for axis in ("x", "y", "z"):
        burst_center = 0.20 + rng.uniform(-0.02, 0.02)
        # impacts and the underlying rhythm are phase-locked in real motion:
        # keep the harmonic crest near the burst so they never cancel out
        phase = 0.25 - burst_center + rng.uniform(-0.08, 0.08)
        out[axis] = _AxisPattern(
            burst=rng.uniform(*preset.burst_amp),
            dip=rng.uniform(*preset.dip_amp),
            harmonic=rng.uniform(*preset.harmonic_amp),
            burst_center=burst_center,
            dip_center=0.58 + rng.uniform(-0.02, 0.02),
            phase=phase,
        )
    return out


def _add_bump(signal: np.ndarray, center: float, width: float, amplitude: float):
    """Superpose a raised-cosine bump of the given sample width in place."""
    lo = max(int(np.ceil(center - width / 2.0)), 0)
    hi = min(int(np.floor(center + width / 2.0)), len(signal) - 1)
    if hi < lo:
        return
    idx = np.arange(lo, hi + 1)
    signal[idx] += amplitude * 0.5 * (1.0 + np.cos(2.0 * np.pi * (idx - center) / width))


def _generate(label, seed, amplitude_scale, n_samples=None, n_cycles=None) -> Recording:
    if label not in ACTIVITY_LABELS:
        raise ValueError(f"unknown activity label {label!r}")
    preset = ACTIVITY_PRESETS[label]
    rng = np.random.default_rng(seed)
    patterns = _axis_patterns(rng, preset)

    period = preset.period
    if n_samples is None:
        n_samples = int(round(n_cycles * period))
    count = int(np.ceil(n_samples / period)) + 1
    # one timing error per cycle, shared across axes; anchored to the grid
    # so errors never accumulate into phase drift
    jitter = rng.uniform(-preset.jitter, preset.jitter, size=count)
    anchors = np.arange(count) * period + jitter

    t = np.arange(n_samples, dtype=float)
    axes = {}
    for axis in ("x", "y", "z"):
        p = patterns[axis]
        gain = _AXIS_GAIN[axis] * amplitude_scale
        clean = p.harmonic * np.sin(2.0 * np.pi * (t / period + p.phase))
        for anchor in anchors:
            _add_bump(clean, anchor + p.burst_center * period, 0.46 * period, p.burst)
            _add_bump(clean, anchor + p.dip_center * period, 0.38 * period, -p.dip)
        noise = rng.normal(0.0, preset.noise, n_samples)
        axes[axis] = _AXIS_OFFSETS[axis] + gain * (clean + noise)
    return Recording(
        subject_id=f"synthetic-{seed}",
        label=label,
        ax=axes["x"],
        ay=axes["y"],
        az=axes["z"],
        seq=np.arange(n_samples),
    )


def generate_recording(
    label: str, n_samples: int, seed: int = 0, amplitude_scale: float = 1.0
) -> Recording:
    """A recording of `n_samples` with the activity's cyclic pattern."""
    return _generate(label, seed, amplitude_scale, n_samples=n_samples)


def generate_cycles(
    label: str, n_cycles: int, seed: int = 0, amplitude_scale: float = 1.0
) -> Recording:
    """A recording spanning exactly `n_cycles` cycles of the base period."""
    return _generate(label, seed, amplitude_scale, n_cycles=n_cycles)
