import numpy as np
import pytest

from cycleauth.exceptions import DataError, UnderdeterminedFitError
from cycleauth.fitting import FitConfig, SeasonalitySpec, fit
from cycleauth.model import TimeSeries, evaluate, model_to_json
from cycleauth.seasonality import SeasonalityParams
from cycleauth.trend import make_trend
from cycleauth.model import ForecastModel


def test_constant_series():
    t = np.arange(50.0)
    model = fit(
        TimeSeries(t=t, y=np.full(50, 3.0)),
        FitConfig(n_changepoints=0, detect_singularities=False),
    )
    assert model.trend.k == pytest.approx(0.0, abs=1e-6)
    assert model.trend.m == pytest.approx(3.0, abs=1e-6)
    assert model.noise_sigma == pytest.approx(0.0, abs=1e-6)


def test_synthetic_recovery_line_plus_tone():
    rng = np.random.default_rng(2)
    t = np.arange(200.0)
    y = 2.0 * t + 1.0 + np.sin(2 * np.pi * t / 20.0) + rng.normal(0, 0.1, 200)
    model = fit(
        TimeSeries(t=t, y=y),
        FitConfig(seasonalities=(SeasonalitySpec(20.0, 1),)),
    )
    a1, b1 = model.seasonalities[0].coeffs
    assert model.trend.k == pytest.approx(2.0, rel=0.01)
    assert b1 == pytest.approx(1.0, rel=0.05)
    assert abs(a1) < 0.05


def test_fit_is_deterministic():
    rng = np.random.default_rng(9)
    t = np.arange(150.0)
    y = 0.3 * t + np.sin(2 * np.pi * t / 25.0) + rng.normal(0, 0.2, 150)
    config = FitConfig(seasonalities=(SeasonalitySpec(25.0, 2),))
    first = model_to_json(fit(TimeSeries(t=t, y=y), config))
    second = model_to_json(fit(TimeSeries(t=t, y=y), config))
    assert first == second


def test_underdetermined_fit_rejected():
    t = np.arange(10.0)
    with pytest.raises(UnderdeterminedFitError):
        fit(TimeSeries(t=t, y=np.sin(t)), FitConfig(n_changepoints=10))


def test_nonfinite_input_rejected():
    with pytest.raises(DataError):
        TimeSeries(t=np.arange(5.0), y=np.array([1.0, 2.0, np.nan, 4.0, 5.0]))


def test_idempotence_on_noiseless_model_output():
    generator = ForecastModel(
        trend=make_trend("linear", k=0.05, m=1.0, s=[40.0], delta=[0.02]),
        seasonalities=(
            SeasonalityParams(period=25.0, order=2, coeffs=[0.7, -0.4, 0.2, 0.1]),
        ),
        train_span=(0.0, 199.0),
    )
    t = np.arange(200.0)
    y = evaluate(generator, t)
    refit = fit(
        TimeSeries(t=t, y=y),
        FitConfig(
            seasonalities=(SeasonalitySpec(25.0, 2),),
            changepoints=(40.0,),
            detect_singularities=False,
        ),
    )
    rmse = np.sqrt(np.mean((evaluate(refit, t) - y) ** 2))
    assert rmse < 1e-3


def test_missing_data_changes_rmse_by_under_25_percent():
    rng = np.random.default_rng(4)
    t = np.arange(300.0)
    y = 0.2 * t + 2.0 * np.sin(2 * np.pi * t / 30.0) + rng.normal(0, 0.3, 300)
    config = FitConfig(seasonalities=(SeasonalitySpec(30.0, 3),))

    full = fit(TimeSeries(t=t, y=y), config)
    rmse_full = np.sqrt(np.mean((evaluate(full, t) - y) ** 2))

    keep = np.sort(rng.choice(300, size=240, replace=False))
    sparse = fit(TimeSeries(t=t[keep], y=y[keep]), config)
    rmse_sparse = np.sqrt(np.mean((evaluate(sparse, t[keep]) - y[keep]) ** 2))
    assert abs(rmse_sparse - rmse_full) / rmse_full < 0.25


def test_singularity_detection_registers_glitch_window():
    rng = np.random.default_rng(6)
    t = np.arange(300.0)
    y = np.sin(2 * np.pi * t / 30.0) + rng.normal(0, 0.05, 300)
    y[100:106] += 4.0  # sensor glitch
    model = fit(
        TimeSeries(t=t, y=y),
        FitConfig(
            seasonalities=(SeasonalitySpec(30.0, 2),),
            n_changepoints=0,
            singularity_threshold=3.0,
        ),
    )
    assert len(model.events) >= 1
    covering = [
        (s, e, k) for (s, e, k) in model.events.windows if s <= 102.0 <= e
    ]
    assert covering, f"glitch not captured: {model.events.windows}"
    assert covering[0][2] == pytest.approx(4.0, abs=0.5)
    # glitch absorbed as an event, so the residual scale stays small
    assert model.noise_sigma < 0.2


def test_explicit_event_windows_fit_effects():
    t = np.arange(120.0)
    y = 0.1 * t + np.where((t >= 50) & (t <= 60), 2.5, 0.0)
    model = fit(
        TimeSeries(t=t, y=y),
        FitConfig(
            n_changepoints=0,
            event_windows=((50.0, 60.0),),
            detect_singularities=False,
        ),
    )
    assert model.events.windows[0][2] == pytest.approx(2.5, abs=1e-6)
    assert model.noise_sigma < 1e-6


def test_logistic_fit_recovers_growth_curve():
    t = np.arange(100.0)
    truth = make_trend("logistic", k=0.15, m=40.0, s=[], delta=[], capacity=10.0)
    from cycleauth.trend import eval_logistic_trend

    y = eval_logistic_trend(truth, t)
    model = fit(
        TimeSeries(t=t, y=y),
        FitConfig(
            trend="logistic", capacity=10.0, n_changepoints=0,
            detect_singularities=False,
        ),
    )
    fitted = eval_logistic_trend(model.trend, t)
    assert np.sqrt(np.mean((fitted - y) ** 2)) < 0.05


def test_delta_scale_zero_without_changepoints():
    t = np.arange(60.0)
    model = fit(
        TimeSeries(t=t, y=0.5 * t),
        FitConfig(n_changepoints=0, detect_singularities=False),
    )
    assert model.delta_scale == 0.0
    assert model.train_span == (0.0, 59.0)
