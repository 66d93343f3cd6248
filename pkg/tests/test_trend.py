import numpy as np
import pytest

from cycleauth.exceptions import DataError, DegenerateRateError
from cycleauth.trend import (
    TrendParams,
    changepoint_matrix,
    continuity_gammas,
    eval_linear_trend,
    eval_logistic_trend,
    make_trend,
)


def segment_rate_offset(kind, k, m, s, delta, gamma, n_active):
    """Independent per-segment closed form: rate and offset after n changepoints."""
    rate = k + float(np.sum(delta[:n_active]))
    offset = m + float(np.sum(gamma[:n_active]))
    return rate, offset


def segment_eval(kind, capacity, k, m, s, delta, gamma, n_active, t):
    rate, offset = segment_rate_offset(kind, k, m, s, delta, gamma, n_active)
    if kind == "linear":
        return rate * t + offset
    return capacity / (1.0 + np.exp(-rate * (t - offset)))


class TestLogisticTrend:
    def test_midpoint(self):
        p = make_trend("logistic", k=1.0, m=0.0, s=[], delta=[], capacity=1.0)
        assert eval_logistic_trend(p, 0.0) == pytest.approx(0.5)

    def test_zero_rate_is_constant(self):
        p = make_trend("logistic", k=0.0, m=0.0, s=[], delta=[], capacity=1.0)
        for t in (-100.0, 0.0, 3.7, 250.0):
            assert eval_logistic_trend(p, t) == pytest.approx(0.5)

    def test_changepoint_golden_value(self):
        # frozen from an independent scalar evaluation of the closed form
        # with gamma_1 = (4 - 2) * (1 - 0.5/0.8) = 0.75
        p = make_trend("logistic", k=0.5, m=2.0, s=[4.0], delta=[0.3], capacity=10.0)
        assert eval_logistic_trend(p, 6.0) == pytest.approx(
            9.308615796566533, abs=1e-12
        )

    def test_zero_changepoint_equivalence_is_bitwise(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            k, m, c = rng.normal(), rng.normal(), abs(rng.normal()) + 0.5
            p = make_trend("logistic", k=k, m=m, s=[], delta=[], capacity=c)
            t = rng.normal(size=13) * 10
            plain = np.where(
                k * (t - m) > 700, c,
                np.where(k * (t - m) < -700, 0.0, c / (1.0 + np.exp(-k * (t - m)))),
            )
            assert np.array_equal(eval_logistic_trend(p, t), plain)

    def test_exp_overflow_saturates(self):
        p = make_trend("logistic", k=10.0, m=0.0, s=[], delta=[], capacity=3.0)
        assert eval_logistic_trend(p, 1e6) == 3.0
        assert eval_logistic_trend(p, -1e6) == 0.0

    def test_wrong_kind_rejected(self):
        p = make_trend("linear", k=1.0, m=0.0, s=[], delta=[])
        with pytest.raises(DataError):
            eval_logistic_trend(p, 0.0)


class TestLinearTrend:
    def test_plain_line(self):
        p = make_trend("linear", k=2.0, m=1.0, s=[], delta=[])
        assert eval_linear_trend(p, 3.0) == pytest.approx(7.0)

    def test_continuity_at_changepoint(self):
        p = make_trend("linear", k=1.0, m=0.0, s=[5.0], delta=[1.0])
        assert eval_linear_trend(p, 5.0) == pytest.approx(5.0)

    def test_piecewise_hand_value(self):
        # hand evaluation: 2*7 - 5 = 9, checked by summing segment slopes
        p = make_trend("linear", k=1.0, m=0.0, s=[5.0], delta=[1.0])
        assert eval_linear_trend(p, 7.0) == pytest.approx(9.0)


class TestContinuityGammas:
    def test_linear_definition(self):
        assert continuity_gammas("linear", 1.0, 0.0, [5.0], [1.0]) == pytest.approx(
            [-5.0]
        )

    def test_zero_deltas_zero_gammas(self):
        for kind in ("linear", "logistic"):
            g = continuity_gammas(kind, 0.7, 1.2, [2.0, 4.0, 8.0], [0.0, 0.0, 0.0])
            assert np.allclose(g, 0.0)

    def test_logistic_two_changepoints_golden(self):
        # frozen from the sequential closed form, verified by the numeric
        # continuity oracle below
        g = continuity_gammas("logistic", 0.5, 2.0, [4.0, 8.0], [0.3, -0.2])
        assert g == pytest.approx([0.75, -1.7499999999999996], abs=1e-12)

    def test_numeric_continuity_oracle(self):
        # solve for each offset correction numerically by forcing the left
        # and right limits to agree, then compare with the closed form
        from scipy.optimize import brentq

        k, m, c = 0.5, 2.0, 10.0
        s = [4.0, 8.0]
        delta = [0.3, -0.2]
        closed = continuity_gammas("logistic", k, m, s, delta)

        solved = []
        for j in range(len(s)):
            rate_before = k + sum(delta[:j])
            rate_after = rate_before + delta[j]
            offset_before = m + sum(solved)

            def gap(gj):
                left = c / (1.0 + np.exp(-rate_before * (s[j] - offset_before)))
                right = c / (1.0 + np.exp(-rate_after * (s[j] - offset_before - gj)))
                return left - right

            solved.append(brentq(gap, -50.0, 50.0, xtol=1e-14))
        assert np.allclose(solved, closed, atol=1e-9)

    def test_degenerate_rate_error(self):
        with pytest.raises(DegenerateRateError):
            continuity_gammas("logistic", 0.5, 0.0, [3.0], [-0.5])


class TestRandomizedContinuity:
    @pytest.mark.parametrize("kind", ["linear", "logistic"])
    def test_segment_limits_agree_at_changepoints(self, kind):
        rng = np.random.default_rng(7)
        for _ in range(300):
            n_cp = int(rng.integers(1, 5))
            s = np.sort(rng.uniform(1.0, 90.0, n_cp))
            s += np.arange(n_cp) * 1e-3  # keep strictly increasing
            k = rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0])
            m = rng.uniform(-5.0, 5.0)
            delta = rng.uniform(-0.3, 0.3, n_cp) * abs(k)
            capacity = rng.uniform(1.0, 20.0)
            p = make_trend(kind, k=k, m=m, s=s, delta=delta, capacity=capacity)
            for j, sj in enumerate(s):
                left = segment_eval(kind, capacity, k, m, s, p.delta, p.gamma, j, sj)
                right = segment_eval(
                    kind, capacity, k, m, s, p.delta, p.gamma, j + 1, sj
                )
                assert abs(left - right) < 1e-9

    @pytest.mark.parametrize("kind", ["linear", "logistic"])
    def test_matches_independent_segment_oracle(self, kind):
        rng = np.random.default_rng(13)
        for _ in range(100):
            n_cp = int(rng.integers(0, 4))
            s = np.sort(rng.uniform(5.0, 80.0, n_cp))
            k = rng.uniform(0.1, 1.5)
            m = rng.uniform(-3.0, 3.0)
            delta = rng.uniform(-0.2, 0.2, n_cp) * k
            capacity = rng.uniform(1.0, 10.0)
            p = make_trend(kind, k=k, m=m, s=s, delta=delta, capacity=capacity)
            t = rng.uniform(0.0, 100.0, 20)
            expected = np.array(
                [
                    segment_eval(
                        kind, capacity, k, m, s, p.delta, p.gamma,
                        int(np.sum(s <= ti)), ti,
                    )
                    for ti in t
                ]
            )
            got = (
                eval_linear_trend(p, t) if kind == "linear" else eval_logistic_trend(p, t)
            )
            assert np.allclose(got, expected, atol=1e-10)


class TestTrendParams:
    def test_changepoint_matrix_step_indicator(self):
        a = changepoint_matrix(np.array([0.0, 4.0, 5.0, 9.0]), np.array([4.0, 8.0]))
        assert a.tolist() == [[0, 0], [1, 0], [1, 0], [1, 1]]

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(DataError):
            TrendParams(kind="linear", k=1.0, m=0.0, s=[1.0], delta=[], gamma=[])

    def test_unsorted_changepoints_rejected(self):
        with pytest.raises(DataError):
            make_trend("linear", k=1.0, m=0.0, s=[5.0, 2.0], delta=[0.1, 0.1])

    def test_logistic_needs_positive_capacity(self):
        with pytest.raises(DataError):
            TrendParams(kind="logistic", k=1.0, m=0.0, capacity=0.0)
