import math

import numpy as np
import pytest

from cycleauth.exceptions import DataError
from cycleauth.seasonality import (
    SeasonalityParams,
    eval_seasonality,
    eval_seasonality_complex,
    fourier_design,
)


def test_zero_coefficients_zero_everywhere():
    sp = SeasonalityParams(period=10.0, order=3, coeffs=np.zeros(6))
    t = np.linspace(-20, 20, 41)
    assert np.all(eval_seasonality(sp, t) == 0.0)


def test_cosine_at_zero():
    sp = SeasonalityParams(period=10.0, order=1, coeffs=[1.0, 0.0])
    assert eval_seasonality(sp, 0.0) == pytest.approx(1.0)


def test_term_by_term_golden_value():
    # frozen from a scalar term-by-term calculation:
    # 0.5 cos(2pi 13/50) + 1.2 sin(2pi 13/50) - 0.3 cos(4pi 13/50) + 0.7 sin(4pi 13/50)
    sp = SeasonalityParams(period=50.0, order=2, coeffs=[0.5, 1.2, -0.3, 0.7])
    assert eval_seasonality(sp, 13.0) == pytest.approx(1.3761379612485996, abs=1e-12)


def test_term_by_term_oracle_in_place():
    sp = SeasonalityParams(period=50.0, order=2, coeffs=[0.5, 1.2, -0.3, 0.7])
    t = 13.0
    expected = 0.0
    for n, (a, b) in enumerate([(0.5, 1.2), (-0.3, 0.7)], start=1):
        theta = 2.0 * math.pi * n * t / 50.0
        expected += a * math.cos(theta) + b * math.sin(theta)
    assert eval_seasonality(sp, t) == pytest.approx(expected, abs=1e-14)


def test_complex_form_equivalence_randomized():
    rng = np.random.default_rng(5)
    for _ in range(200):
        order = int(rng.integers(1, 6))
        sp = SeasonalityParams(
            period=float(rng.uniform(3.0, 80.0)),
            order=order,
            coeffs=rng.normal(size=2 * order),
        )
        t = rng.uniform(-100, 100, size=17)
        assert np.allclose(
            eval_seasonality(sp, t), eval_seasonality_complex(sp, t), atol=1e-12
        )


def test_design_matrix_matches_interleaved_coefficients():
    t = np.array([0.0, 1.0, 2.5])
    x = fourier_design(t, period=10.0, order=2)
    assert x.shape == (3, 4)
    assert np.allclose(x[:, 0], np.cos(2 * np.pi * t / 10))
    assert np.allclose(x[:, 1], np.sin(2 * np.pi * t / 10))
    assert np.allclose(x[:, 2], np.cos(4 * np.pi * t / 10))
    assert np.allclose(x[:, 3], np.sin(4 * np.pi * t / 10))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(period=0.0, order=1, coeffs=[1.0, 0.0]),
        dict(period=10.0, order=0, coeffs=[]),
        dict(period=10.0, order=2, coeffs=[1.0, 0.0]),
        dict(period=10.0, order=1, coeffs=[1.0, 0.0], prior_scale=0.0),
    ],
)
def test_invalid_params_rejected(kwargs):
    with pytest.raises(DataError):
        SeasonalityParams(**kwargs)
