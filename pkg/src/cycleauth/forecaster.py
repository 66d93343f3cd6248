"""Estimator-style front end so the forecaster composes with sklearn tooling."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .fitting import FitConfig, SeasonalitySpec, fit
from .model import PredictionBand, TimeSeries, evaluate, predict

__all__ = ["AdditiveForecaster"]


class AdditiveForecaster(BaseEstimator):
    """Additive trend + Fourier seasonality forecaster with a fit/predict API.

    Parameters mirror :class:`cycleauth.fitting.FitConfig`.  `seasonalities`
    is a sequence of (period, order, prior_scale) tuples; set `auto_period`
    to detect the dominant cycle instead.  All randomness is controlled by
    `seed`, so fitting and prediction are reproducible.
    """

    def __init__(
        self,
        trend="linear",
        capacity=None,
        n_changepoints=10,
        changepoint_range=0.8,
        changepoint_prior_scale=0.05,
        seasonalities=(),
        auto_period=False,
        auto_order=8,
        detect_singularities=True,
        singularity_threshold=3.0,
        level=0.8,
        n_sims=1000,
        seed=0,
    ):
        self.trend = trend
        self.capacity = capacity
        self.n_changepoints = n_changepoints
        self.changepoint_range = changepoint_range
        self.changepoint_prior_scale = changepoint_prior_scale
        self.seasonalities = seasonalities
        self.auto_period = auto_period
        self.auto_order = auto_order
        self.detect_singularities = detect_singularities
        self.singularity_threshold = singularity_threshold
        self.level = level
        self.n_sims = n_sims
        self.seed = seed

    def _config(self) -> FitConfig:
        specs = tuple(
            spec if isinstance(spec, SeasonalitySpec) else SeasonalitySpec(*spec)
            for spec in self.seasonalities
        )
        return FitConfig(
            trend=self.trend,
            capacity=self.capacity,
            n_changepoints=self.n_changepoints,
            changepoint_range=self.changepoint_range,
            changepoint_prior_scale=self.changepoint_prior_scale,
            seasonalities=specs,
            auto_period=self.auto_period,
            auto_order=self.auto_order,
            detect_singularities=self.detect_singularities,
            singularity_threshold=self.singularity_threshold,
            level=self.level,
            seed=self.seed,
        )

    def fit(self, t, y):
        series = TimeSeries(t=np.asarray(t, dtype=float), y=np.asarray(y, dtype=float))
        self.model_ = fit(series, self._config())
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError("call fit before predicting")

    def predict(self, horizon: int) -> np.ndarray:
        """Deterministic point forecast for the next `horizon` steps."""
        self._check_fitted()
        return self.predict_band(horizon).yhat

    def predict_band(self, horizon: int, level=None, n_sims=None) -> PredictionBand:
        self._check_fitted()
        return predict(
            self.model_,
            horizon,
            level=self.level if level is None else level,
            n_sims=self.n_sims if n_sims is None else n_sims,
            seed=self.seed,
        )

    def evaluate(self, t) -> np.ndarray:
        """In-sample (or arbitrary-time) deterministic model value."""
        self._check_fitted()
        return evaluate(self.model_, t)
