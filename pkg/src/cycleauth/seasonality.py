"""Fourier seasonality: truncated harmonic expansion of a base period."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError

__all__ = [
    "SeasonalityParams",
    "fourier_design",
    "eval_seasonality",
    "eval_seasonality_complex",
]


@dataclass(frozen=True)
class SeasonalityParams:
    """One seasonal component.

    coeffs interleaves (a_n, b_n) for harmonics n = 1..order, matching the
    column order of :func:`fourier_design`.  prior_scale is the standard
    deviation of the zero-mean Gaussian prior on the coefficients.
    """

    period: float
    order: int
    coeffs: np.ndarray
    prior_scale: float = 10.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))
        if not self.period > 0:
            raise DataError("seasonal period must be positive")
        if self.order < 1:
            raise DataError("seasonal order must be >= 1")
        if len(self.coeffs) != 2 * self.order:
            raise DataError(
                f"expected {2 * self.order} coefficients, got {len(self.coeffs)}"
            )
        if not self.prior_scale > 0:
            raise DataError("prior_scale must be positive")


def fourier_design(t, period: float, order: int) -> np.ndarray:
    """Design matrix with columns [cos(2*pi*n*t/P), sin(2*pi*n*t/P)] for n=1..order."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    cols = np.empty((len(t), 2 * order))
    for n in range(1, order + 1):
        theta = (2.0 * np.pi * n / period) * t
        cols[:, 2 * (n - 1)] = np.cos(theta)
        cols[:, 2 * (n - 1) + 1] = np.sin(theta)
    return cols


def eval_seasonality(sp: SeasonalityParams, t) -> np.ndarray:
    """sum_n a_n cos(2*pi*n*t/P) + b_n sin(2*pi*n*t/P)."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = fourier_design(t_arr, sp.period, sp.order) @ sp.coeffs
    return out if np.ndim(t) else float(out[0])


def eval_seasonality_complex(sp: SeasonalityParams, t) -> np.ndarray:
    """Equivalent complex-exponential form.

    Uses the two-sided Hermitian expansion with c_n = (a_n - i*b_n) / 2 and
    c_{-n} = conj(c_n); the imaginary parts cancel, so the real part equals
    :func:`eval_seasonality` up to rounding.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    total = np.zeros(len(t_arr), dtype=complex)
    for n in range(1, sp.order + 1):
        a_n = sp.coeffs[2 * (n - 1)]
        b_n = sp.coeffs[2 * (n - 1) + 1]
        c_n = 0.5 * (a_n - 1j * b_n)
        phase = np.exp(2j * np.pi * n * t_arr / sp.period)
        total += c_n * phase + np.conj(c_n) * np.conj(phase)
    out = total.real
    return out if np.ndim(t) else float(out[0])
