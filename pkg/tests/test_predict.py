import numpy as np
import pytest

from cycleauth.events import EventTerm, eval_events
from cycleauth.exceptions import InsufficientSimulationsError
from cycleauth.fitting import FitConfig, fit
from cycleauth.model import ForecastModel, TimeSeries, evaluate, predict
from cycleauth.seasonality import SeasonalityParams, eval_seasonality
from cycleauth.trend import eval_trend, make_trend


def flat_model(noise_sigma=1.0, delta_scale=0.0, with_changepoints=False):
    s = [100.0, 200.0, 300.0, 400.0] if with_changepoints else []
    delta = [0.0] * len(s)
    return ForecastModel(
        trend=make_trend("linear", k=0.0, m=0.0, s=s, delta=delta),
        noise_sigma=noise_sigma,
        delta_scale=delta_scale,
        train_span=(0.0, 499.0),
    )


def test_zero_uncertainty_band_collapses():
    band = predict(flat_model(noise_sigma=0.0), 20, level=0.8, n_sims=100, seed=0)
    assert np.array_equal(band.lower, band.yhat)
    assert np.array_equal(band.upper, band.yhat)


def test_gaussian_quantile_half_width():
    # for a pure-noise model the 80% band half-width estimates the
    # standard-normal 90th percentile, 1.2816
    band = predict(flat_model(noise_sigma=1.0), 500, level=0.8, n_sims=2000, seed=1)
    half_width = float(np.mean(band.upper - band.lower)) / 2.0
    assert half_width == pytest.approx(1.2816, rel=0.15)


def test_insufficient_simulations_rejected():
    with pytest.raises(InsufficientSimulationsError):
        predict(flat_model(), 10, level=0.8, n_sims=19, seed=0)


def test_band_reproducible_for_fixed_seed():
    a = predict(flat_model(delta_scale=0.1, with_changepoints=True), 50, 0.8, 500, seed=42)
    b = predict(flat_model(delta_scale=0.1, with_changepoints=True), 50, 0.8, 500, seed=42)
    assert np.array_equal(a.lower, b.lower)
    assert np.array_equal(a.upper, b.upper)
    c = predict(flat_model(delta_scale=0.1, with_changepoints=True), 50, 0.8, 500, seed=43)
    assert not np.array_equal(a.lower, c.lower)


def test_interval_nesting_across_levels():
    model = flat_model(noise_sigma=0.7, delta_scale=0.05, with_changepoints=True)
    narrow = predict(model, 80, level=0.5, n_sims=400, seed=3)
    wide = predict(model, 80, level=0.9, n_sims=400, seed=3)
    assert np.all(wide.lower <= narrow.lower)
    assert np.all(narrow.upper <= wide.upper)


def test_band_brackets_point_forecast():
    model = flat_model(noise_sigma=0.3, delta_scale=0.2, with_changepoints=True)
    band = predict(model, 60, level=0.8, n_sims=50, seed=9)
    assert np.all(band.lower <= band.yhat)
    assert np.all(band.yhat <= band.upper)


def test_future_changepoints_widen_far_horizon():
    base = predict(flat_model(noise_sigma=0.1), 300, level=0.8, n_sims=800, seed=5)
    risky = predict(
        flat_model(noise_sigma=0.1, delta_scale=0.05, with_changepoints=True),
        300, level=0.8, n_sims=800, seed=5,
    )
    base_width = float(np.mean(base.upper[-50:] - base.lower[-50:]))
    risky_width = float(np.mean(risky.upper[-50:] - risky.lower[-50:]))
    assert risky_width > base_width * 1.5


def test_logistic_future_changepoint_paths_stay_bounded():
    model = ForecastModel(
        trend=make_trend(
            "logistic", k=0.1, m=50.0, s=[30.0, 60.0], delta=[0.02, -0.01],
            capacity=5.0,
        ),
        noise_sigma=0.0,
        delta_scale=0.05,
        train_span=(0.0, 99.0),
    )
    band = predict(model, 200, level=0.9, n_sims=300, seed=7)
    assert np.all(band.lower >= -1e-9)
    assert np.all(band.upper <= 5.0 + 1e-9)


def test_decomposition_additivity_is_exact():
    trend = make_trend("linear", k=0.2, m=1.0, s=[50.0], delta=[0.1])
    seasonalities = (
        SeasonalityParams(period=20.0, order=2, coeffs=[0.5, -0.2, 0.1, 0.3]),
        SeasonalityParams(period=7.0, order=1, coeffs=[0.05, 0.02]),
    )
    events = EventTerm(windows=((10.0, 15.0, 0.7),))
    model = ForecastModel(
        trend=trend, seasonalities=seasonalities, events=events,
        train_span=(0.0, 99.0),
    )
    t = np.linspace(0.0, 99.0, 321)
    total = eval_trend(trend, t)
    for sp in seasonalities:
        total = total + eval_seasonality(sp, t)
    total = total + eval_events(events, t)
    assert np.array_equal(evaluate(model, t), total)


def test_interval_calibration_on_fitted_noise():
    rng = np.random.default_rng(12)
    y = rng.normal(0.0, 1.0, 500)
    model = fit(
        TimeSeries(t=np.arange(500.0), y=y),
        FitConfig(n_changepoints=0, detect_singularities=False),
    )
    band = predict(model, 1000, level=0.8, n_sims=2000, seed=0)
    held_out = rng.normal(0.0, 1.0, 1000)
    coverage = np.mean((band.lower <= held_out) & (held_out <= band.upper))
    assert 0.70 <= coverage <= 0.90
