"""Piecewise trend component: logistic or linear growth with rate changepoints.

The trend keeps a base rate ``k`` and offset ``m``.  At each changepoint
``s_j`` the rate shifts by ``delta_j``; an offset correction ``gamma_j``
is derived (never fitted) so the curve stays continuous.  Changepoints act
through the step indicator a_j(t) = 1 for t >= s_j, so rate adjustments are
cumulative from the changepoint onward.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DataError, DegenerateRateError

__all__ = [
    "TrendParams",
    "changepoint_matrix",
    "continuity_gammas",
    "eval_linear_trend",
    "eval_logistic_trend",
    "eval_trend",
]

# exp() saturation bound: beyond this the logistic is pinned to exactly 0 or C
_EXP_ARG_LIMIT = 700.0


@dataclass(frozen=True)
class TrendParams:
    """Fitted trend parameters.

    kind is "logistic" or "linear".  capacity is only meaningful for the
    logistic kind.  gamma must always be the continuity correction of
    (k, m, s, delta); use :func:`continuity_gammas` rather than setting it.
    """

    kind: str
    k: float
    m: float
    capacity: float = 1.0
    s: np.ndarray = field(default_factory=lambda: np.empty(0))
    delta: np.ndarray = field(default_factory=lambda: np.empty(0))
    gamma: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=float))
        object.__setattr__(self, "delta", np.asarray(self.delta, dtype=float))
        object.__setattr__(self, "gamma", np.asarray(self.gamma, dtype=float))
        if self.kind not in ("logistic", "linear"):
            raise DataError(f"unknown trend kind {self.kind!r}")
        if not (len(self.s) == len(self.delta) == len(self.gamma)):
            raise DataError("s, delta and gamma must have equal lengths")
        if len(self.s) > 1 and not np.all(np.diff(self.s) > 0):
            raise DataError("changepoint times must be strictly increasing")
        if self.kind == "logistic" and not self.capacity > 0:
            raise DataError("logistic trend requires capacity > 0")


def changepoint_matrix(t: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Step-indicator matrix A with A[i, j] = 1 iff t[i] >= s[j]."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = np.asarray(s, dtype=float)
    return (t[:, None] >= s[None, :]).astype(float)


def continuity_gammas(kind: str, k: float, m: float, s, delta) -> np.ndarray:
    """Offset corrections that keep the trend continuous at each changepoint.

    linear:   gamma_j = -s_j * delta_j
    logistic: gamma_j = (s_j - m - sum_{l<j} gamma_l)
                        * (1 - (k + sum_{l<j} delta_l) / (k + sum_{l<=j} delta_l))
    """
    s = np.asarray(s, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if len(s) != len(delta):
        raise DataError("s and delta must have equal lengths")
    if kind == "linear":
        return -s * delta
    if kind != "logistic":
        raise DataError(f"unknown trend kind {kind!r}")
    gamma = np.zeros(len(s))
    cum_delta = 0.0
    cum_gamma = 0.0
    for j in range(len(s)):
        rate_before = k + cum_delta
        rate_after = rate_before + delta[j]
        if rate_after == 0.0:
            raise DegenerateRateError(
                f"rate k + sum(delta[:{j + 1}]) is exactly zero at changepoint {j}"
            )
        gamma[j] = (s[j] - m - cum_gamma) * (1.0 - rate_before / rate_after)
        cum_gamma += gamma[j]
        cum_delta += delta[j]
    return gamma


def _rate_and_offset(p: TrendParams, t: np.ndarray):
    if len(p.s) == 0:
        rate = np.full_like(t, p.k)
        offset = np.full_like(t, p.m)
    else:
        a = changepoint_matrix(t, p.s)
        rate = p.k + a @ p.delta
        offset = p.m + a @ p.gamma
    return rate, offset


def eval_logistic_trend(p: TrendParams, t) -> np.ndarray:
    """Segmented logistic growth C / (1 + exp(-(k + a'delta)(t - (m + a'gamma)))).

    The exp argument is saturated: values beyond +/-700 map to exactly C or 0.
    """
    if p.kind != "logistic":
        raise DataError("eval_logistic_trend requires a logistic TrendParams")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if len(p.s) == 0:
        arg = p.k * (t_arr - p.m)
    else:
        rate, offset = _rate_and_offset(p, t_arr)
        arg = rate * (t_arr - offset)
    out = np.empty_like(arg)
    high = arg > _EXP_ARG_LIMIT
    low = arg < -_EXP_ARG_LIMIT
    mid = ~(high | low)
    out[high] = p.capacity
    out[low] = 0.0
    out[mid] = p.capacity / (1.0 + np.exp(-arg[mid]))
    return out if np.ndim(t) else float(out[0])


def eval_linear_trend(p: TrendParams, t) -> np.ndarray:
    """Piecewise-linear trend (k + a'delta) * t + (m + a'gamma)."""
    if p.kind != "linear":
        raise DataError("eval_linear_trend requires a linear TrendParams")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    rate, offset = _rate_and_offset(p, t_arr)
    out = rate * t_arr + offset
    return out if np.ndim(t) else float(out[0])


def eval_trend(p: TrendParams, t) -> np.ndarray:
    """Dispatch on the trend kind."""
    if p.kind == "logistic":
        return eval_logistic_trend(p, t)
    return eval_linear_trend(p, t)


def make_trend(kind: str, k: float, m: float, s, delta, capacity: float = 1.0) -> TrendParams:
    """Build TrendParams with gamma derived from the continuity rule."""
    gamma = continuity_gammas(kind, k, m, s, delta)
    return TrendParams(
        kind=kind, k=float(k), m=float(m), capacity=float(capacity),
        s=np.asarray(s, dtype=float), delta=np.asarray(delta, dtype=float), gamma=gamma,
    )
