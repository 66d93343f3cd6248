"""Penalized least-squares fitting of the additive model.

Seasonal and event coefficients enter the model linearly, so for a given
trend they are solved in closed form (ridge on the seasonal block, event
effects free).  Trend parameters carry an L1 penalty on the changepoint
rate adjustments, handled by iterated soft-thresholding: solve, shrink
each adjustment by the penalty over its local curvature, drop the ones
that hit zero, re-solve, repeat until the support is stable.  The linear
trend kind makes the whole problem quadratic and needs no outer
optimizer; the logistic kind wraps the same loop around bounded L-BFGS
steps over (k, m, delta) with the linear block profiled out.

Everything is deterministic given the config.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import minimize

from .events import EventTerm
from .exceptions import DataError, UnderdeterminedFitError
from .model import ForecastModel, TimeSeries
from .period import estimate_period
from .seasonality import SeasonalityParams, fourier_design
from .trend import TrendParams, continuity_gammas, eval_logistic_trend
from .validation import check_series, median_spacing

__all__ = ["SeasonalitySpec", "FitConfig", "fit", "config_to_dict", "config_from_dict"]


@dataclass(frozen=True)
class SeasonalitySpec:
    period: float
    order: int = 8
    prior_scale: float = 10.0


@dataclass(frozen=True)
class FitConfig:
    """Everything `fit` needs besides the data.

    trend: "linear" or "logistic".
    capacity: logistic ceiling; None means 1.1 * max|y| of the training data.
    changepoints: explicit changepoint times; overrides the placement rule.
    changepoint_prior_scale: Laplace scale tau; the L1 weight is 1/tau.
    auto_period: detect the dominant period and add a seasonality for it.
    event_windows: known (start, end) singularity windows; effects are fitted.
    detect_singularities: find residual runs beyond the threshold and refit
        with them as event windows.
    """

    trend: str = "linear"
    capacity: float | None = None
    n_changepoints: int = 10
    changepoint_range: float = 0.8
    changepoints: tuple | None = None
    changepoint_prior_scale: float = 0.05
    seasonalities: tuple = ()
    auto_period: bool = False
    auto_order: int = 8
    auto_prior_scale: float = 10.0
    event_windows: tuple = ()
    detect_singularities: bool = True
    singularity_threshold: float = 3.0
    max_singularity_windows: int = 10
    level: float = 0.8
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seasonalities", tuple(self.seasonalities))
        object.__setattr__(self, "event_windows", tuple(self.event_windows))
        if self.changepoints is not None:
            object.__setattr__(self, "changepoints", tuple(self.changepoints))
        if self.trend not in ("linear", "logistic"):
            raise DataError(f"unknown trend kind {self.trend!r}")
        if not self.changepoint_prior_scale > 0:
            raise DataError("changepoint_prior_scale must be positive")


def config_to_dict(config: FitConfig) -> dict:
    doc = {
        "trend": config.trend,
        "capacity": config.capacity,
        "n_changepoints": config.n_changepoints,
        "changepoint_range": config.changepoint_range,
        "changepoints": list(config.changepoints) if config.changepoints else None,
        "changepoint_prior_scale": config.changepoint_prior_scale,
        "seasonalities": [
            {"period": s.period, "order": s.order, "prior_scale": s.prior_scale}
            for s in config.seasonalities
        ],
        "auto_period": config.auto_period,
        "auto_order": config.auto_order,
        "auto_prior_scale": config.auto_prior_scale,
        "event_windows": [list(w) for w in config.event_windows],
        "detect_singularities": config.detect_singularities,
        "singularity_threshold": config.singularity_threshold,
        "max_singularity_windows": config.max_singularity_windows,
        "level": config.level,
        "seed": config.seed,
    }
    return doc


def config_from_dict(doc: dict) -> FitConfig:
    return FitConfig(
        trend=doc["trend"],
        capacity=doc["capacity"],
        n_changepoints=int(doc["n_changepoints"]),
        changepoint_range=float(doc["changepoint_range"]),
        changepoints=tuple(doc["changepoints"]) if doc["changepoints"] else None,
        changepoint_prior_scale=float(doc["changepoint_prior_scale"]),
        seasonalities=tuple(
            SeasonalitySpec(
                period=float(s["period"]),
                order=int(s["order"]),
                prior_scale=float(s["prior_scale"]),
            )
            for s in doc["seasonalities"]
        ),
        auto_period=bool(doc["auto_period"]),
        auto_order=int(doc["auto_order"]),
        auto_prior_scale=float(doc["auto_prior_scale"]),
        event_windows=tuple(tuple(w) for w in doc["event_windows"]),
        detect_singularities=bool(doc["detect_singularities"]),
        singularity_threshold=float(doc["singularity_threshold"]),
        max_singularity_windows=int(doc["max_singularity_windows"]),
        level=float(doc["level"]),
        seed=int(doc["seed"]),
    )


# ---------------------------------------------------------------------------
# design matrices
# ---------------------------------------------------------------------------


def _place_changepoints(t: np.ndarray, config: FitConfig) -> np.ndarray:
    if config.changepoints is not None:
        s = np.asarray(sorted(set(float(c) for c in config.changepoints)))
        if len(s) and (s[0] < t[0] or s[-1] > t[-1]):
            raise DataError("explicit changepoints must lie within the training range")
        return s
    n_cp = config.n_changepoints
    if n_cp <= 0:
        return np.empty(0)
    last = int(np.floor(config.changepoint_range * (len(t) - 1)))
    if last < 1:
        return np.empty(0)
    idx = np.unique(np.linspace(0, last, n_cp + 1).round().astype(int)[1:])
    return np.unique(t[idx])


def _resolve_seasonalities(t, y, config: FitConfig) -> tuple:
    specs = list(config.seasonalities)
    if config.auto_period:
        dt = median_spacing(t)
        span = len(t) * dt
        p_min, p_max = 2.0 * dt, span / 2.0
        if p_max > p_min:
            est = estimate_period(t, y, p_min, p_max)
            specs.append(
                SeasonalitySpec(
                    period=est.period,
                    order=config.auto_order,
                    prior_scale=config.auto_prior_scale,
                )
            )
    return tuple(specs)


def _seasonal_design(t: np.ndarray, specs) -> tuple[np.ndarray, np.ndarray]:
    """Stacked Fourier blocks plus the matching ridge diagonal (1/sigma^2)."""
    blocks, ridge = [], []
    for spec in specs:
        blocks.append(fourier_design(t, spec.period, spec.order))
        ridge.extend([1.0 / spec.prior_scale**2] * (2 * spec.order))
    if blocks:
        return np.hstack(blocks), np.asarray(ridge)
    return np.empty((len(t), 0)), np.empty(0)


def _event_design(t: np.ndarray, windows) -> np.ndarray:
    cols = np.empty((len(t), len(windows)))
    for j, (start, end) in enumerate(windows):
        cols[:, j] = ((t >= start) & (t <= end)).astype(float)
    return cols


def _penalized_lstsq(X: np.ndarray, y: np.ndarray, ridge_diag: np.ndarray) -> np.ndarray:
    """Least squares with per-coefficient ridge, via the augmented system."""
    p = X.shape[1]
    if p == 0:
        return np.empty(0)
    aug = np.vstack([X, np.diag(np.sqrt(ridge_diag))])
    rhs = np.concatenate([y, np.zeros(p)])
    coef, *_ = np.linalg.lstsq(aug, rhs, rcond=None)
    return coef


def _soft(values: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    return np.sign(values) * np.maximum(np.abs(values) - thresholds, 0.0)


# ---------------------------------------------------------------------------
# linear trend: fully quadratic, solved directly
# ---------------------------------------------------------------------------


def _fit_linear_trend(t, y, s, lam_l1, X_lin, ridge_lin, max_prunes=None):
    relu = np.maximum(t[:, None] - s[None, :], 0.0) if len(s) else np.empty((len(t), 0))
    base = np.column_stack([t, np.ones(len(t))])
    if max_prunes is None:
        max_prunes = len(s)

    active = np.arange(len(s))
    prunes = 0
    while True:
        X = np.hstack([base, relu[:, active], X_lin])
        ridge = np.concatenate([np.zeros(2 + len(active)), ridge_lin])
        coef = _penalized_lstsq(X, y, ridge)
        delta = coef[2 : 2 + len(active)]
        if len(active) == 0 or prunes >= max_prunes:
            break
        curvature = 2.0 * np.sum(relu[:, active] ** 2, axis=0)
        thresholds = np.where(curvature > 0, lam_l1 / np.maximum(curvature, 1e-300), 0.0)
        keep = _soft(delta, thresholds) != 0.0
        if keep.all():
            break
        active = active[keep]
        prunes += 1

    delta_full = np.zeros(len(s))
    if len(active):
        delta_full[active] = coef[2 : 2 + len(active)]
    k, m = float(coef[0]), float(coef[1])
    lin_coef = coef[2 + len(active) :]
    return k, m, delta_full, lin_coef


# ---------------------------------------------------------------------------
# logistic trend: profiled linear block inside a bounded quasi-Newton loop
# ---------------------------------------------------------------------------


def _logistic_init(t, y, capacity):
    y0 = float(np.clip(y[0] / capacity, 0.01, 0.99))
    y1 = float(np.clip(y[-1] / capacity, 0.01, 0.99))
    span = t[-1] - t[0]
    l0 = np.log(y0 / (1.0 - y0))
    l1 = np.log(y1 / (1.0 - y1))
    k0 = (l1 - l0) / span if span > 0 else 0.0
    if abs(k0) < 1e-6:
        k0 = 1e-3
    m0 = t[0] - l0 / k0
    return k0, m0


class _ProfiledObjective:
    """SSE plus ridge with the linear block solved in closed form per call."""

    def __init__(self, t, y, s, capacity, X_lin, ridge_lin):
        self.t, self.y, self.s, self.capacity = t, y, s, capacity
        self.X = X_lin
        self.ridge = ridge_lin
        self.has_linear = X_lin.shape[1] > 0
        if self.has_linear:
            gram = X_lin.T @ X_lin + np.diag(ridge_lin + 1e-12)
            self.factor = cho_factor(gram)

    def trend_values(self, theta):
        k, m = theta[0], theta[1]
        delta = np.asarray(theta[2:])
        cum = k + np.concatenate([[0.0], np.cumsum(delta)])
        if np.any(np.abs(cum) < 1e-12):
            return None
        gamma = continuity_gammas("logistic", k, m, self.s, delta)
        params = TrendParams(
            kind="logistic", k=k, m=m, capacity=self.capacity,
            s=self.s, delta=delta, gamma=gamma,
        )
        return eval_logistic_trend(params, self.t)

    def linear_coefficients(self, residual):
        if not self.has_linear:
            return np.empty(0)
        return cho_solve(self.factor, self.X.T @ residual)

    def __call__(self, theta):
        trend = self.trend_values(theta)
        if trend is None:
            return 1e15
        residual = self.y - trend
        coef = self.linear_coefficients(residual)
        if self.has_linear:
            residual = residual - self.X @ coef
            penalty = float(coef @ (self.ridge * coef))
        else:
            penalty = 0.0
        value = float(residual @ residual) + penalty
        return value if np.isfinite(value) else 1e15


def _fit_logistic_trend(t, y, s, lam_l1, X_lin, ridge_lin, capacity, max_rounds=5):
    k0, m0 = _logistic_init(t, y, capacity)
    span = t[-1] - t[0]
    k_bound = 100.0 * (abs(k0) + 1.0)

    active = np.arange(len(s))
    theta = np.concatenate([[k0, m0], np.zeros(len(active))])
    best = None
    for _ in range(max_rounds):
        obj = _ProfiledObjective(t, y, s[active], capacity, X_lin, ridge_lin)
        bounds = [(-k_bound, k_bound), (t[0] - 10 * span, t[-1] + 10 * span)]
        bounds += [(-k_bound, k_bound)] * len(active)
        result = minimize(
            obj, theta, method="L-BFGS-B", bounds=bounds,
            options={"maxiter": 200, "ftol": 1e-12},
        )
        theta = result.x
        best = (theta.copy(), active.copy(), obj)
        delta = theta[2:]
        if len(active) == 0:
            break
        # finite-difference curvature along each adjustment for the prox step
        thresholds = np.empty(len(active))
        f0 = obj(theta)
        for j in range(len(active)):
            eps = 1e-4 * (1.0 + abs(delta[j]))
            probe = theta.copy()
            probe[2 + j] += eps
            f_plus = obj(probe)
            probe[2 + j] -= 2 * eps
            f_minus = obj(probe)
            h = (f_plus - 2 * f0 + f_minus) / eps**2
            thresholds[j] = lam_l1 / h if h > 1e-12 else 0.0
        shrunk = _soft(delta, thresholds)
        keep = shrunk != 0.0
        if keep.all():
            break
        active = active[keep]
        theta = np.concatenate([theta[:2], delta[keep]])

    theta, active, obj = best
    delta_full = np.zeros(len(s))
    delta_full[active] = theta[2:]
    trend = obj.trend_values(theta)
    residual = y - trend if trend is not None else y.copy()
    lin_coef = obj.linear_coefficients(residual)
    return float(theta[0]), float(theta[1]), delta_full, lin_coef


# ---------------------------------------------------------------------------
# singularity detection
# ---------------------------------------------------------------------------


def _detect_singularity_windows(t, residual, threshold, max_windows, known):
    sigma = float(np.std(residual))
    scale = 1.0 + float(np.max(np.abs(residual))) if len(residual) else 1.0
    if sigma <= 1e-12 * scale:
        return []
    marked = np.flatnonzero(np.abs(residual) > threshold * sigma)
    if len(marked) == 0:
        return []
    runs = np.split(marked, np.flatnonzero(np.diff(marked) > 1) + 1)
    candidates = []
    for run in runs:
        start, end = float(t[run[0]]), float(t[run[-1]])
        overlaps = any(start <= ke and ks <= end for ks, ke in known)
        if not overlaps:
            candidates.append((start, end, float(np.abs(residual[run]).mean())))
    candidates.sort(key=lambda w: -w[2])
    return sorted((s, e) for s, e, _ in candidates[:max_windows])


# ---------------------------------------------------------------------------
# public entry point
# ---------------------------------------------------------------------------


def _fit_once(t, y, s, config, specs, event_windows, capacity):
    X_seas, ridge_seas = _seasonal_design(t, specs)
    X_event = _event_design(t, event_windows)
    X_lin = np.hstack([X_seas, X_event])
    ridge_lin = np.concatenate([ridge_seas, np.zeros(X_event.shape[1])])
    lam_l1 = 1.0 / config.changepoint_prior_scale

    if config.trend == "linear":
        k, m, delta, lin_coef = _fit_linear_trend(t, y, s, lam_l1, X_lin, ridge_lin)
    else:
        k, m, delta, lin_coef = _fit_logistic_trend(
            t, y, s, lam_l1, X_lin, ridge_lin, capacity
        )

    gamma = continuity_gammas(config.trend, k, m, s, delta)
    trend = TrendParams(
        kind=config.trend, k=k, m=m, capacity=capacity, s=s, delta=delta, gamma=gamma
    )

    offset = 0
    seasonalities = []
    for spec in specs:
        width = 2 * spec.order
        seasonalities.append(
            SeasonalityParams(
                period=spec.period,
                order=spec.order,
                coeffs=lin_coef[offset : offset + width],
                prior_scale=spec.prior_scale,
            )
        )
        offset += width
    effects = lin_coef[offset:]
    events = EventTerm(
        windows=tuple(
            (start, end, float(effect))
            for (start, end), effect in zip(event_windows, effects)
        )
    )
    model = ForecastModel(
        trend=trend,
        seasonalities=tuple(seasonalities),
        events=events,
        noise_sigma=0.0,
        delta_scale=0.0,
        train_span=(float(t[0]), float(t[-1])),
    )
    return model


def fit(ts: TimeSeries, config: FitConfig = FitConfig()) -> ForecastModel:
    """Fit the additive model by penalized least squares.

    Raises UnderdeterminedFitError when the sample count is below twice the
    parameter count (seasonal coefficients + changepoints + trend pair).
    """
    t, y = check_series(ts.t, ts.y, min_length=2)
    specs = _resolve_seasonalities(t, y, config)
    s = _place_changepoints(t, config)

    n_seasonal = sum(2 * spec.order for spec in specs)
    needed = 2 * (n_seasonal + len(s) + 2)
    if len(t) < needed:
        raise UnderdeterminedFitError(
            f"{len(t)} samples cannot identify {n_seasonal} seasonal coefficients "
            f"+ {len(s)} changepoints (need at least {needed})"
        )

    capacity = config.capacity
    if capacity is None:
        capacity = max(1.1 * float(np.max(np.abs(y))), 1e-6)

    explicit = tuple((float(a), float(b)) for a, b in config.event_windows)
    from .model import evaluate  # local import avoids a cycle at module load

    model = _fit_once(t, y, s, config, specs, explicit, capacity)
    residual = y - evaluate(model, t)

    if config.detect_singularities:
        detected = _detect_singularity_windows(
            t, residual, config.singularity_threshold,
            config.max_singularity_windows, explicit,
        )
        if detected:
            windows = tuple(sorted(list(explicit) + detected))
            model = _fit_once(t, y, s, config, specs, windows, capacity)
            residual = y - evaluate(model, t)

    noise_sigma = float(np.std(residual))
    delta_scale = float(np.mean(np.abs(model.trend.delta))) if len(s) else 0.0
    return replace(model, noise_sigma=noise_sigma, delta_scale=delta_scale)
