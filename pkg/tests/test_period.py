import numpy as np
import pytest

from cycleauth.exceptions import DataError
from cycleauth.period import estimate_period
from cycleauth.synthetic import generate_cycles


def test_pure_tone():
    t = np.arange(500.0)
    est = estimate_period(t, np.sin(2 * np.pi * t / 50.0), 2.0, 250.0)
    assert est.period == pytest.approx(50.0, abs=1.0)
    assert est.score > 0.5


def test_dominant_tone_wins():
    # constructed so the 50-sample tone holds most of the in-band power
    t = np.arange(500.0)
    y = np.sin(2 * np.pi * t / 50.0) + 0.3 * np.sin(2 * np.pi * t / 7.0)
    est = estimate_period(t, y, 2.0, 250.0)
    assert est.period == pytest.approx(50.0, rel=0.03)


def test_white_noise_returns_low_score_without_error():
    rng = np.random.default_rng(3)
    t = np.arange(400.0)
    est = estimate_period(t, rng.normal(size=400), 2.0, 200.0)
    assert est.score < 0.2
    assert 2.0 <= est.period <= 200.0


def test_trend_does_not_mask_cycle():
    t = np.arange(500.0)
    y = 0.05 * t + np.sin(2 * np.pi * t / 50.0)
    est = estimate_period(t, y, 2.0, 250.0)
    assert est.period == pytest.approx(50.0, abs=1.0)


def test_stable_across_jumping_repetitions():
    # growing prefixes of a cyclic recording give a stable estimate
    rec = generate_cycles("jumping", 10, seed=4)
    t = rec.t
    periods = []
    for n_cycles in (5, 7, 10):
        n = int(n_cycles * 50)
        est = estimate_period(t[:n], rec.ax[:n], 2.0, n / 2.0)
        periods.append(est.period)
    assert max(periods) - min(periods) < 0.1 * np.mean(periods)


def test_band_preconditions():
    t = np.arange(100.0)
    y = np.sin(t)
    with pytest.raises(DataError):
        estimate_period(t, y, 1.0, 50.0)  # p_min below two samples
    with pytest.raises(DataError):
        estimate_period(t, y, 2.0, 80.0)  # p_max beyond half the span
    with pytest.raises(DataError):
        estimate_period(t, y, 30.0, 20.0)  # inverted band
