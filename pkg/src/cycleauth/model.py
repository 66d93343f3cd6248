"""Additive forecast model: trend + seasonal harmonics + events + noise.

A fitted :class:`ForecastModel` is an immutable value.  Evaluation is
deterministic; prediction intervals come from seeded Monte Carlo paths
that perturb the future trend with simulated changepoints and add
Gaussian observation noise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .events import EventTerm, eval_events
from .exceptions import DataError, InsufficientSimulationsError
from .seasonality import SeasonalityParams, eval_seasonality
from .trend import TrendParams, continuity_gammas, eval_trend
from .validation import check_in_unit_interval, check_series

__all__ = [
    "TimeSeries",
    "ForecastModel",
    "PredictionBand",
    "evaluate",
    "predict",
    "model_to_dict",
    "model_from_dict",
    "model_to_json",
    "model_from_json",
]

SCHEMA_VERSION = 1

# quantiles need a minimal path count to mean anything
MIN_SIMULATIONS = 20


@dataclass(frozen=True)
class TimeSeries:
    """Ordered samples of one signal axis.  t strictly increasing, y finite."""

    t: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        t, y = check_series(self.t, self.y, min_length=2)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return len(self.t)


@dataclass(frozen=True)
class ForecastModel:
    """Fitted decomposition with residual scale and changepoint dispersion."""

    trend: TrendParams
    seasonalities: tuple = field(default_factory=tuple)
    events: EventTerm = field(default_factory=EventTerm)
    noise_sigma: float = 0.0
    delta_scale: float = 0.0
    train_span: tuple = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "seasonalities", tuple(self.seasonalities))
        object.__setattr__(
            self, "train_span", (float(self.train_span[0]), float(self.train_span[1]))
        )
        if self.noise_sigma < 0:
            raise DataError("noise_sigma must be non-negative")
        if self.delta_scale < 0:
            raise DataError("delta_scale must be non-negative")


@dataclass(frozen=True)
class PredictionBand:
    """Point forecast with lower/upper quantile bounds at a nominal level."""

    t: np.ndarray
    yhat: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    level: float

    def __post_init__(self):
        for name in ("t", "yhat", "lower", "upper"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = len(self.t)
        if not (len(self.yhat) == len(self.lower) == len(self.upper) == n):
            raise DataError("band arrays must have equal lengths")
        check_in_unit_interval(self.level, "level")
        if np.any(self.lower > self.yhat) or np.any(self.yhat > self.upper):
            raise DataError("band must satisfy lower <= yhat <= upper elementwise")

    def __len__(self):
        return len(self.t)


def evaluate(model: ForecastModel, t) -> np.ndarray:
    """Deterministic model value at t.

    The floating-point accumulation order is fixed and documented: trend
    first, then each seasonality in stored order, then events.  The result
    is therefore exactly eval_trend + sum(eval_seasonality) + eval_events.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = eval_trend(model.trend, t_arr)
    for sp in model.seasonalities:
        out = out + eval_seasonality(sp, t_arr)
    out = out + eval_events(model.events, t_arr)
    return out if np.ndim(t) else float(out[0])


def _future_grid(model: ForecastModel, horizon: int, dt: float) -> np.ndarray:
    t_end = model.train_span[1]
    return t_end + dt * np.arange(1, horizon + 1)


def _simulate_linear_deviation(rng, deltas: np.ndarray, dt: float) -> np.ndarray:
    # a changepoint at step h bends the slope for steps after h:
    # dev[h] = dt * sum_{h' < h} cum_delta[h']
    cum = np.cumsum(deltas, axis=1)
    dev = np.zeros_like(deltas)
    dev[:, 1:] = dt * np.cumsum(cum[:, :-1], axis=1)
    return dev


def _simulate_logistic_deviation(
    model: ForecastModel, t_future: np.ndarray, deltas: np.ndarray
) -> np.ndarray:
    """Per-path logistic trend minus the deterministic extension.

    Future changepoints continue the fitted trend from its end-of-training
    rate and offset; the continuity recursion is advanced per path, one
    horizon step at a time, with vectorized path state.
    """
    p = model.trend
    k_end = p.k + float(np.sum(p.delta))
    m_end = p.m + float(np.sum(p.gamma))
    n_sims, horizon = deltas.shape
    base = eval_trend(p, t_future)

    cum_delta = np.zeros(n_sims)
    cum_gamma = np.zeros(n_sims)
    paths = np.empty((n_sims, horizon))
    for h in range(horizon):
        d = deltas[:, h]
        hit = d != 0.0
        if hit.any():
            rate_before = k_end + cum_delta[hit]
            rate_after = rate_before + d[hit]
            # a zero post-change rate would break continuity; drop that draw
            ok = rate_after != 0.0
            idx = np.flatnonzero(hit)[ok]
            g = (t_future[h] - m_end - cum_gamma[idx]) * (
                1.0 - (k_end + cum_delta[idx]) / (k_end + cum_delta[idx] + d[idx])
            )
            cum_gamma[idx] += g
            cum_delta[idx] += d[idx]
        rate = k_end + cum_delta
        offset = m_end + cum_gamma
        arg = np.clip(rate * (t_future[h] - offset), -700.0, 700.0)
        paths[:, h] = p.capacity / (1.0 + np.exp(-arg))
    return paths - base[None, :]


def predict(
    model: ForecastModel,
    horizon: int,
    level: float = 0.8,
    n_sims: int = 1000,
    seed: int = 0,
    dt: float = 1.0,
) -> PredictionBand:
    """Forecast `horizon` steps past the training span with quantile bounds.

    Paths draw future changepoints by thinning a Poisson process at the
    historical changepoint density (magnitudes Laplace(0, delta_scale))
    and add N(0, noise_sigma^2) observation noise.  The random stream does
    not depend on `level`, so bands at nested levels nest for a fixed seed.
    """
    if horizon < 1:
        raise DataError("horizon must be >= 1")
    check_in_unit_interval(level, "level")
    if n_sims < MIN_SIMULATIONS:
        raise InsufficientSimulationsError(
            f"n_sims must be >= {MIN_SIMULATIONS}, got {n_sims}"
        )
    t_future = _future_grid(model, horizon, dt)
    yhat = evaluate(model, t_future)

    rng = np.random.default_rng(seed)
    span = model.train_span[1] - model.train_span[0]
    density = len(model.trend.s) / span if span > 0 else 0.0
    p_hit = min(density * dt, 1.0)

    deviation = np.zeros((n_sims, horizon))
    if p_hit > 0.0 and model.delta_scale > 0.0:
        hits = rng.random((n_sims, horizon)) < p_hit
        magnitudes = rng.laplace(0.0, model.delta_scale, size=(n_sims, horizon))
        deltas = np.where(hits, magnitudes, 0.0)
        if model.trend.kind == "linear":
            deviation = _simulate_linear_deviation(rng, deltas, dt)
        else:
            deviation = _simulate_logistic_deviation(model, t_future, deltas)
    if model.noise_sigma > 0.0:
        noise = rng.normal(0.0, model.noise_sigma, size=(n_sims, horizon))
    else:
        noise = 0.0

    paths = yhat[None, :] + deviation + noise
    alpha = (1.0 - level) / 2.0
    lower, upper = np.quantile(paths, [alpha, 1.0 - alpha], axis=0)
    # guarantee the band brackets the point forecast even at tiny n_sims
    lower = np.minimum(lower, yhat)
    upper = np.maximum(upper, yhat)
    return PredictionBand(t=t_future, yhat=yhat, lower=lower, upper=upper, level=level)


def model_to_dict(model: ForecastModel) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "trend": {
            "kind": model.trend.kind,
            "k": model.trend.k,
            "m": model.trend.m,
            "capacity": model.trend.capacity,
            "s": model.trend.s.tolist(),
            "delta": model.trend.delta.tolist(),
            "gamma": model.trend.gamma.tolist(),
        },
        "seasonalities": [
            {
                "period": sp.period,
                "order": sp.order,
                "coeffs": sp.coeffs.tolist(),
                "prior_scale": sp.prior_scale,
            }
            for sp in model.seasonalities
        ],
        "events": [list(w) for w in model.events.windows],
        "noise_sigma": model.noise_sigma,
        "delta_scale": model.delta_scale,
        "train_span": list(model.train_span),
    }


def model_from_dict(doc: dict) -> ForecastModel:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DataError(f"unsupported model schema version {version!r}")
    tr = doc["trend"]
    trend = TrendParams(
        kind=tr["kind"],
        k=float(tr["k"]),
        m=float(tr["m"]),
        capacity=float(tr["capacity"]),
        s=np.asarray(tr["s"], dtype=float),
        delta=np.asarray(tr["delta"], dtype=float),
        gamma=np.asarray(tr["gamma"], dtype=float),
    )
    seasonalities = tuple(
        SeasonalityParams(
            period=float(sp["period"]),
            order=int(sp["order"]),
            coeffs=np.asarray(sp["coeffs"], dtype=float),
            prior_scale=float(sp["prior_scale"]),
        )
        for sp in doc["seasonalities"]
    )
    events = EventTerm(windows=tuple(tuple(w) for w in doc["events"]))
    return ForecastModel(
        trend=trend,
        seasonalities=seasonalities,
        events=events,
        noise_sigma=float(doc["noise_sigma"]),
        delta_scale=float(doc["delta_scale"]),
        train_span=tuple(doc["train_span"]),
    )


def model_to_json(model: ForecastModel) -> str:
    """Canonical JSON text; serialize -> parse -> serialize is byte-identical."""
    return json.dumps(model_to_dict(model), sort_keys=True, separators=(",", ":"))


def model_from_json(text: str) -> ForecastModel:
    return model_from_dict(json.loads(text))


def rebuild_gammas(trend: TrendParams) -> TrendParams:
    """Return trend with gamma recomputed from the continuity rule."""
    gamma = continuity_gammas(trend.kind, trend.k, trend.m, trend.s, trend.delta)
    return TrendParams(
        kind=trend.kind, k=trend.k, m=trend.m, capacity=trend.capacity,
        s=trend.s, delta=trend.delta, gamma=gamma,
    )
