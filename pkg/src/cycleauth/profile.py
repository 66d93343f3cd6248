"""Per-user activity profiles and the accept / escalate / reject decision.

A profile bundles, per activity, the three fitted axis models, the
novelty gate, the registered sensor-singularity windows and the raw
sample buffers used for retraining.  Profiles are immutable values:
``authenticate`` never mutates anything, ``enroll`` and
``accept_and_update`` return new profiles.

The legitimacy rule is the Tolerable Error check: a new window is
compared sample-by-sample against each axis model's prediction band for
the next horizon, and the fraction falling inside the band (the
coverage) is fused across axes with min, the conservative choice.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .events import EventTerm
from .exceptions import (
    ColdStartError,
    ContractViolationError,
    DataError,
    InsufficientCyclesError,
)
from .features import (
    ACTIVITY_LABELS,
    AXES,
    UNKNOWN_LABEL,
    ActivityWindow,
    extract_features,
    segment_starts,
)
from .fitting import FitConfig, config_from_dict, config_to_dict, fit
from .model import (
    ForecastModel,
    TimeSeries,
    model_from_dict,
    model_to_dict,
    predict,
)
from .novelty import MahalanobisNovelty, train_novelty
from .period import estimate_period
from .validation import check_series, median_spacing

__all__ = [
    "Verdict",
    "AuthConfig",
    "AuthDecision",
    "ProfileEntry",
    "ActivityProfile",
    "enroll",
    "authenticate",
    "accept_and_update",
    "profile_to_json",
    "profile_from_json",
]

PROFILE_SCHEMA_VERSION = 1
BUFFER_CAP = 5000


class Verdict(str, enum.Enum):
    ACCEPT = "accept"
    ESCALATE = "escalate"
    REJECT = "reject"


@dataclass(frozen=True)
class AuthConfig:
    """Decision thresholds and reproducibility knobs.

    te_threshold is the Tolerable Error bound: minimum per-axis band
    coverage for acceptance.  Below escalation_floor the window is
    rejected outright.  calibration_windows controls how many windows
    resampled from the freshly fitted axis models are mixed into novelty
    training, so the gate covers both observed and model-consistent data.
    """

    te_threshold: float = 0.70
    escalation_floor: float = 0.40
    level: float = 0.80
    n_sims: int = 1000
    seed: int = 0
    window_length: int = 100
    min_cycles: int = 5
    cycle_tolerance: float = 0.02
    calibration_windows: int = 40

    def __post_init__(self):
        if not 0.0 <= self.escalation_floor <= self.te_threshold <= 1.0:
            raise DataError("need 0 <= escalation_floor <= te_threshold <= 1")


@dataclass(frozen=True)
class AuthDecision:
    verdict: Verdict
    coverage_ratio: float
    te_threshold: float
    evidence: dict


@dataclass(frozen=True)
class ProfileEntry:
    label: str
    axis_models: dict
    novelty: MahalanobisNovelty
    singularities: dict
    observation_count: int
    normalization: dict
    buffer_t: np.ndarray
    buffers: dict
    fit_config: FitConfig


@dataclass(frozen=True)
class ActivityProfile:
    user_id: str
    entries: dict = field(default_factory=dict)

    def labels(self):
        return sorted(self.entries)


def _confirm_cycles(t, axes: dict, config: AuthConfig) -> float:
    """Best-scoring dominant period across axes; errors if under min_cycles."""
    dt = median_spacing(t)
    n = len(t)
    span = n * dt
    p_min, p_max = 2.0 * dt, span / 2.0
    best = None
    for axis in AXES:
        try:
            est = estimate_period(t, axes[axis], p_min, p_max)
        except DataError:
            continue
        if best is None or est.score > best.score:
            best = est
    if best is None:
        raise InsufficientCyclesError("could not estimate a cycle period")
    cycles = span / best.period
    required = config.min_cycles * (1.0 - config.cycle_tolerance)
    if cycles < required:
        raise InsufficientCyclesError(
            f"found {cycles:.2f} cycles of period {best.period:.1f}; "
            f"need at least {config.min_cycles}"
        )
    return best.period


def _default_fit_config(seed: int) -> FitConfig:
    return FitConfig(trend="linear", auto_period=True, seed=seed)


def _normalize(values: np.ndarray, stats: tuple) -> np.ndarray:
    mean, std = stats
    return (values - mean) / std


def _fit_axes(t, axes: dict, normalization: dict, fit_config: FitConfig) -> dict:
    models = {}
    for axis in AXES:
        z = _normalize(axes[axis], normalization[axis])
        models[axis] = fit(TimeSeries(t=t, y=z), fit_config)
    return models


def sample_window(
    models: dict,
    normalization: dict,
    label: str,
    horizon: int,
    seed: int,
    noise_scale: float = 1.0,
    amplitude_scale: float = 1.0,
) -> ActivityWindow:
    """Draw one window from fitted axis models, mapped back to raw units.

    The deterministic forecast for the next `horizon` steps plus Gaussian
    noise at `noise_scale` times each model's residual sigma; deviations
    are stretched by `amplitude_scale` to synthesize impostors.
    """
    from .model import evaluate  # deferred to keep module load light

    rng = np.random.default_rng(seed)
    t_w = np.arange(horizon, dtype=float)
    series = {}
    for axis in AXES:
        m = models[axis]
        t_future = m.train_span[1] + 1.0 + np.arange(horizon)
        z = evaluate(m, t_future) + rng.normal(0.0, noise_scale * m.noise_sigma, horizon)
        mean, std = normalization[axis]
        series[axis] = TimeSeries(t=t_w, y=mean + std * amplitude_scale * z)
    return ActivityWindow(label=label, x=series["x"], y=series["y"], z=series["z"])


def enroll(
    profile: ActivityProfile,
    label: str,
    t,
    x,
    y,
    z,
    config: AuthConfig = AuthConfig(),
    fit_config: FitConfig | None = None,
) -> ActivityProfile:
    """Create (or replace) the activity entry from an enrollment recording.

    Requires at least `config.min_cycles` complete cycles, confirmed from
    the dominant-period estimate; raises InsufficientCyclesError otherwise.
    """
    if label not in ACTIVITY_LABELS:
        raise DataError(f"cannot enroll unknown label {label!r}")
    t, x = check_series(t, x)
    _, y = check_series(t, y)
    _, z = check_series(t, z)
    axes = {"x": x, "y": y, "z": z}

    _confirm_cycles(t, axes, config)

    if fit_config is None:
        fit_config = _default_fit_config(config.seed)
    normalization = {}
    for axis in AXES:
        std = float(np.std(axes[axis]))
        normalization[axis] = (float(np.mean(axes[axis])), std if std > 1e-9 else 1.0)
    models = _fit_axes(t, axes, normalization, fit_config)

    window = min(config.window_length, len(t))
    starts = segment_starts(len(t), window, min_count=5)
    training_windows = [
        ActivityWindow(
            label=label,
            x=TimeSeries(t=t[s : s + window], y=x[s : s + window]),
            y=TimeSeries(t=t[s : s + window], y=y[s : s + window]),
            z=TimeSeries(t=t[s : s + window], y=z[s : s + window]),
        )
        for s in starts
    ]
    # mix in windows resampled from the fitted models: the gate must also
    # recognize data the models themselves would produce, not only the
    # handful of enrollment segments; noise spans [0, noise_sigma]
    training_windows += [
        sample_window(
            models, normalization, label, window,
            seed=config.seed * 7919 + j,
            noise_scale=(j % 4) / 3.0,
        )
        for j in range(config.calibration_windows)
    ]
    novelty = train_novelty(training_windows)

    entry = ProfileEntry(
        label=label,
        axis_models=models,
        novelty=novelty,
        singularities={axis: models[axis].events for axis in AXES},
        observation_count=1,
        normalization=normalization,
        buffer_t=np.asarray(t, dtype=float),
        buffers={axis: np.asarray(axes[axis], dtype=float) for axis in AXES},
        fit_config=fit_config,
    )
    entries = dict(profile.entries)
    entries[label] = entry
    return ActivityProfile(user_id=profile.user_id, entries=entries)


def _axis_seed(seed: int, axis_index: int) -> int:
    return seed * 1000003 + axis_index


def _coverage(entry: ProfileEntry, w: ActivityWindow, config: AuthConfig) -> dict:
    horizon = len(w)
    coverage = {}
    for i, axis in enumerate(AXES):
        band = predict(
            entry.axis_models[axis],
            horizon,
            level=config.level,
            n_sims=config.n_sims,
            seed=_axis_seed(config.seed, i),
        )
        zval = _normalize(w.axes[axis].y, entry.normalization[axis])
        inside = (band.lower <= zval) & (zval <= band.upper)
        coverage[axis] = float(np.mean(inside))
    return coverage


def authenticate(
    w: ActivityWindow, profile: ActivityProfile, config: AuthConfig = AuthConfig()
) -> AuthDecision:
    """Pure decision function: Tolerable-Error band check plus novelty gate.

    accept: min axis coverage >= te_threshold and the novelty gate passes.
    reject: min axis coverage < escalation_floor, or the gate fails.
    escalate: everything in between.
    """
    if not profile.entries:
        raise ColdStartError("profile has no enrolled activities")
    feats = extract_features(w)

    if w.label == UNKNOWN_LABEL:
        matched, best_score = None, -np.inf
        for label in sorted(profile.entries):
            entry = profile.entries[label]
            score = float(entry.novelty.score_samples([feats])[0])
            if score > best_score:
                matched, best_score = label, score
        entry = profile.entries[matched]
        novelty_score = best_score
    else:
        if w.label not in profile.entries:
            raise ColdStartError(
                f"no entry for {w.label!r}; collect more cycles before deciding"
            )
        entry = profile.entries[w.label]
        matched = w.label
        novelty_score = float(entry.novelty.score_samples([feats])[0])

    novelty_pass = novelty_score >= entry.novelty.threshold_
    coverage = _coverage(entry, w, config)
    min_coverage = min(coverage.values())

    if min_coverage >= config.te_threshold and novelty_pass:
        verdict = Verdict.ACCEPT
    elif min_coverage < config.escalation_floor or not novelty_pass:
        verdict = Verdict.REJECT
    else:
        verdict = Verdict.ESCALATE

    evidence = {
        "per_axis_coverage": coverage,
        "novelty_score": novelty_score,
        "novelty_threshold": entry.novelty.threshold_,
        "novelty_pass": bool(novelty_pass),
        "matched_label": matched,
    }
    return AuthDecision(
        verdict=verdict,
        coverage_ratio=min_coverage,
        te_threshold=config.te_threshold,
        evidence=evidence,
    )


def accept_and_update(
    w: ActivityWindow,
    profile: ActivityProfile,
    decision: AuthDecision,
    config: AuthConfig = AuthConfig(),
) -> ActivityProfile:
    """Fold an accepted window into its activity entry and refit the models.

    The window is re-indexed to continue the entry's sample buffer, the
    buffer is capped at the most recent BUFFER_CAP samples per axis, and
    all three axis models are refitted.  The input profile is unchanged.
    """
    if decision.verdict is not Verdict.ACCEPT:
        raise ContractViolationError(
            f"cannot update from a {decision.verdict.value!r} decision"
        )
    label = decision.evidence.get("matched_label", w.label)
    if label not in profile.entries:
        raise ColdStartError(f"no entry for {label!r}")
    entry = profile.entries[label]

    dt = median_spacing(entry.buffer_t)
    t_new = entry.buffer_t[-1] + dt * np.arange(1, len(w) + 1)
    buffer_t = np.concatenate([entry.buffer_t, t_new])[-BUFFER_CAP:]
    buffers = {
        axis: np.concatenate([entry.buffers[axis], w.axes[axis].y])[-BUFFER_CAP:]
        for axis in AXES
    }
    models = _fit_axes(buffer_t, buffers, entry.normalization, entry.fit_config)

    updated = replace(
        entry,
        axis_models=models,
        singularities={axis: models[axis].events for axis in AXES},
        observation_count=entry.observation_count + 1,
        buffer_t=buffer_t,
        buffers=buffers,
    )
    entries = dict(profile.entries)
    entries[label] = updated
    return ActivityProfile(user_id=profile.user_id, entries=entries)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _entry_to_dict(entry: ProfileEntry) -> dict:
    return {
        "label": entry.label,
        "axis_models": {axis: model_to_dict(entry.axis_models[axis]) for axis in AXES},
        "novelty": entry.novelty.to_dict(),
        "singularities": {
            axis: [list(win) for win in entry.singularities[axis].windows]
            for axis in AXES
        },
        "observation_count": entry.observation_count,
        "normalization": {axis: list(entry.normalization[axis]) for axis in AXES},
        "buffer_t": entry.buffer_t.tolist(),
        "buffers": {axis: entry.buffers[axis].tolist() for axis in AXES},
        "fit_config": config_to_dict(entry.fit_config),
    }


def _entry_from_dict(doc: dict) -> ProfileEntry:
    return ProfileEntry(
        label=doc["label"],
        axis_models={
            axis: model_from_dict(doc["axis_models"][axis]) for axis in AXES
        },
        novelty=MahalanobisNovelty.from_dict(doc["novelty"]),
        singularities={
            axis: EventTerm(windows=tuple(tuple(w) for w in doc["singularities"][axis]))
            for axis in AXES
        },
        observation_count=int(doc["observation_count"]),
        normalization={axis: tuple(doc["normalization"][axis]) for axis in AXES},
        buffer_t=np.asarray(doc["buffer_t"], dtype=float),
        buffers={axis: np.asarray(doc["buffers"][axis], dtype=float) for axis in AXES},
        fit_config=config_from_dict(doc["fit_config"]),
    )


def profile_to_dict(profile: ActivityProfile) -> dict:
    return {
        "schema_version": PROFILE_SCHEMA_VERSION,
        "user_id": profile.user_id,
        "entries": {
            label: _entry_to_dict(entry) for label, entry in profile.entries.items()
        },
    }


def profile_from_dict(doc: dict) -> ActivityProfile:
    version = doc.get("schema_version")
    if version != PROFILE_SCHEMA_VERSION:
        raise DataError(f"unsupported profile schema version {version!r}")
    return ActivityProfile(
        user_id=doc["user_id"],
        entries={
            label: _entry_from_dict(entry) for label, entry in doc["entries"].items()
        },
    )


def profile_to_json(profile: ActivityProfile) -> str:
    """Canonical JSON; serialize -> parse -> serialize is byte-identical."""
    return json.dumps(profile_to_dict(profile), sort_keys=True, separators=(",", ":"))


def profile_from_json(text: str) -> ActivityProfile:
    return profile_from_dict(json.loads(text))
