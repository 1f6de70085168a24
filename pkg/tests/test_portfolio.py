import numpy as np
import pandas as pd
import pytest

import oracles
from trendport.errors import MisalignedSeries, StartOutsideCalendar, WindowTooSmall
from trendport.portfolio import (
    inverse_te_weights,
    rebalance_schedule,
    tracking_error,
)


class TestTrackingError:
    def test_identical_series(self):
        x = [1.0, -0.5, 2.0, 0.3]
        assert tracking_error(x, x) == 0.0

    def test_constant_spread_centers_to_zero(self):
        p = [1.0, 2.0, 3.0]
        b = [0.5, 1.5, 2.5]
        assert tracking_error(p, b) == pytest.approx(0.0, abs=1e-15)

    def test_hand_computed(self):
        assert tracking_error([0.0, 2.0], [0.0, 0.0], window=2) == pytest.approx(
            1.4142135623730951, rel=1e-12
        )

    def test_annualized(self):
        te = tracking_error([0.0, 2.0], [0.0, 0.0], annualize=True)
        assert te == pytest.approx(1.4142135623730951 * np.sqrt(252), rel=1e-12)

    def test_matches_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            n = rng.integers(5, 200)
            p = rng.normal(0, 1, n)
            b = rng.normal(0, 1, n)
            assert tracking_error(p, b) == pytest.approx(
                oracles.tracking_error(list(p), list(b)), rel=1e-12
            )

    def test_trailing_window(self):
        p = np.arange(10.0)
        b = np.zeros(10)
        assert tracking_error(p, b, window=4) == pytest.approx(
            oracles.tracking_error(list(p[-4:]), list(b[-4:])), rel=1e-12
        )

    def test_window_too_small(self):
        with pytest.raises(WindowTooSmall):
            tracking_error([1.0, 2.0], [0.0, 0.0], window=1)

    def test_misaligned(self):
        with pytest.raises(MisalignedSeries):
            tracking_error([1.0, 2.0], [0.0])


class TestInverseTeWeights:
    def test_symmetry(self):
        wv = inverse_te_weights({"A": 1.0, "B": 1.0})
        assert wv.weights == pytest.approx({"A": 0.5, "B": 0.5})
        assert wv.cash_weight == 0.0

    def test_forced_ratio(self):
        wv = inverse_te_weights({"A": 1.0, "B": 3.0})
        assert wv.weights["A"] == pytest.approx(0.75)
        assert wv.weights["B"] == pytest.approx(0.25)

    def test_empty_set_all_cash(self):
        wv = inverse_te_weights({})
        assert wv.weights == {}
        assert wv.cash_weight == 1.0
        assert wv.total == 1.0

    def test_zero_te_clamped(self, caplog):
        wv = inverse_te_weights({"A": 0.0, "B": 1.0})
        assert wv.total == pytest.approx(1.0)
        assert wv.weights["A"] > wv.weights["B"]

    def test_properties(self):
        rng = np.random.default_rng(22)
        for _ in range(200):
            n = rng.integers(1, 12)
            te = {f"A{i}": float(rng.uniform(0.01, 5.0)) for i in range(n)}
            wv = inverse_te_weights(te)
            # sum to 1
            assert abs(wv.total - 1.0) <= 1e-12
            # equal risk contribution: w_i * TE_i constant
            contrib = [wv.weights[a] * te[a] for a in te]
            assert max(contrib) - min(contrib) <= 1e-9 * max(contrib)
            # scale invariance
            c = float(rng.uniform(0.1, 10.0))
            scaled = inverse_te_weights({a: t * c for a, t in te.items()})
            for a in te:
                assert abs(scaled.weights[a] - wv.weights[a]) <= 1e-12
            # matches oracle
            order = sorted(te)
            want = oracles.inverse_te_weights([te[a] for a in order])
            for a, w in zip(order, want):
                assert wv.weights[a] == pytest.approx(w, rel=1e-12)

    def test_order_invariance(self):
        te = {"A": 0.5, "B": 1.5, "C": 3.0}
        w1 = inverse_te_weights(te)
        w2 = inverse_te_weights(dict(reversed(list(te.items()))))
        assert w1.weights == pytest.approx(w2.weights)

    def test_monotonicity(self):
        base = inverse_te_weights({"A": 2.0, "B": 1.0})
        lower = inverse_te_weights({"A": 1.0, "B": 1.0})
        assert lower.weights["A"] >= base.weights["A"]


class TestRebalanceSchedule:
    def test_arithmetic_sequence(self):
        cal = pd.bdate_range("2020-01-02", periods=30)
        sched = rebalance_schedule(cal, cal[0], 10)
        assert list(sched) == [cal[0], cal[10], cal[20]]

    def test_period_one_every_day(self):
        cal = pd.bdate_range("2020-01-02", periods=7)
        assert rebalance_schedule(cal, cal[0], 1).equals(cal)

    def test_start_at_last_date(self):
        cal = pd.bdate_range("2020-01-02", periods=7)
        sched = rebalance_schedule(cal, cal[-1], 10)
        assert list(sched) == [cal[-1]]

    def test_start_outside_calendar(self):
        cal = pd.bdate_range("2020-01-02", periods=7)
        with pytest.raises(StartOutsideCalendar):
            rebalance_schedule(cal, "2020-06-01", 10)
