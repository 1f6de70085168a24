import numpy as np
import pandas as pd
import pytest

import oracles
from trendport.errors import DegenerateMean, EmptyRow, NoEligibleAssets
from trendport.returns import FrequencySet, build_asset_panel
from trendport.signals import (
    MOMENTUM,
    TREND,
    SignalComputer,
    build_signal_matrix,
    fuse_majority_vote,
    majority,
    momentum_vote,
    spread_signal,
    trend_vote,
)


def make_panels(price_map, bench, frequencies=FrequencySet()):
    return {
        k: build_asset_panel(s, bench, frequencies) for k, s in price_map.items()
    }


@pytest.fixture
def three_asset_panels():
    rng = np.random.default_rng(11)
    dates = pd.bdate_range("2018-01-02", periods=400)
    bench = pd.Series(
        np.cumprod(1.0 + rng.normal(0.0003, 0.008, 400)), index=dates, name="BM"
    )
    prices = {
        name: pd.Series(
            np.cumprod(1.0 + rng.normal(drift, vol, 400)) * 100.0,
            index=dates,
            name=name,
        )
        for name, (drift, vol) in {
            "A1": (0.0006, 0.012),
            "A2": (0.0000, 0.015),
            "A3": (-0.0004, 0.01),
        }.items()
    }
    return prices, bench


class TestSpreadSignal:
    def test_mean_cancels(self):
        assert spread_signal(2.0, 2.0, 1.0) == pytest.approx(0.01)

    def test_arithmetic(self):
        assert spread_signal(4.0, 2.0, 0.0) == pytest.approx(1.0)

    def test_degenerate_mean(self):
        with pytest.raises(DegenerateMean):
            spread_signal(1.0, 0.0, 1.0)

    def test_matches_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            r1, m, v = rng.normal(0, 2, 3)
            if abs(m) < 1e-6:
                continue
            assert spread_signal(r1, m, v) == pytest.approx(
                oracles.spread(r1, m, v), rel=1e-12
            )


class TestVotes:
    def test_tie_excludes(self):
        assert momentum_vote([1, 1, 1, 0, 0, 0]) == 0

    def test_majority_includes(self):
        assert momentum_vote([1, 1, 1, 1, 0, 0]) == 1

    def test_all_zero(self):
        assert momentum_vote([0, 0, 0]) == 0

    def test_trend_all_ones(self):
        assert trend_vote([1, 1, 1, 1]) == 1

    def test_trend_half(self):
        assert trend_vote([1, 1, 0, 0]) == 0

    def test_trend_single_one(self):
        assert trend_vote([1, 0, 0, 0, 0, 0]) == 0

    def test_empty_row(self):
        with pytest.raises(EmptyRow):
            majority([])

    def test_monotonicity(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            row = rng.integers(0, 2, 6)
            zeros = np.flatnonzero(row == 0)
            if not len(zeros):
                continue
            flipped = row.copy()
            flipped[rng.choice(zeros)] = 1
            assert majority(flipped) >= majority(row)


class TestFusion:
    def test_both_agree(self):
        assert fuse_majority_vote(1, 1, "both") == 1
        assert fuse_majority_vote(1, 1, "either") == 1

    def test_disagreement(self):
        assert fuse_majority_vote(1, 0, "both") == 0
        assert fuse_majority_vote(1, 0, "either") == 1

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            fuse_majority_vote(1, 1, "xor")


class TestSignalMatrix:
    def test_benchmark_clone_never_included(self, three_asset_panels):
        prices, bench = three_asset_panels
        clone = bench.copy()
        clone.name = "CLONE"
        panels = make_panels({"CLONE": clone}, bench)
        comp = SignalComputer(panels, FrequencySet())
        # ratio constant at 1: momentum cells all 0 by strict inequality
        assert not comp.momentum["CLONE"].any()
        assert not comp.include["CLONE"].any()

    def test_outperformer_all_momentum_ones(self):
        dates = pd.bdate_range("2018-01-02", periods=300)
        bench = pd.Series(np.full(300, 100.0), index=dates, name="BM")
        rising = pd.Series(100.0 * 1.001 ** np.arange(300), index=dates, name="UP")
        comp = SignalComputer(make_panels({"UP": rising}, bench), FrequencySet())
        m = comp.cells["UP"][MOMENTUM].iloc[-1]
        t = comp.cells["UP"][TREND].iloc[-1]
        assert m.to_numpy().all()
        # monotone rising ratio sits above every multi-day trailing moving
        # average; the 1-day "average" is the level itself, so that cell is
        # 0 by strict inequality
        assert t[1] == 0
        assert t.drop(1).to_numpy().all()
        assert comp.include["UP"].iloc[-1] == 1

    def test_column_set_identical_across_assets(self, three_asset_panels):
        prices, bench = three_asset_panels
        comp = SignalComputer(make_panels(prices, bench), FrequencySet())
        matrix = comp.matrix_at(prices["A1"].index[-1])
        assert set(matrix.rows) == {"A1", "A2", "A3"}
        lengths = {len(v) for v in matrix.rows.values()}
        assert lengths == {len(matrix.columns)}

    def test_matches_brute_force(self, three_asset_panels):
        prices, bench = three_asset_panels
        freqs = FrequencySet()
        comp = SignalComputer(make_panels(prices, bench), freqs)
        dates = bench.index
        for t in range(260, 400, 13):
            matrix = comp.matrix_at(dates[t])
            for name, s in prices.items():
                want = oracles.signal_cells(
                    list(s.iloc[: t + 1]), list(bench.iloc[: t + 1]), freqs.values
                )
                got = dict(zip(matrix.columns, matrix.rows[name]))
                assert got == want, (name, dates[t])

    def test_no_look_ahead(self, three_asset_panels):
        prices, bench = three_asset_panels
        dates = bench.index
        comp_full = SignalComputer(make_panels(prices, bench), FrequencySet())
        for t in (280, 333, 399):
            cut = dates[t]
            trunc = {k: s.loc[:cut] for k, s in prices.items()}
            comp_cut = SignalComputer(make_panels(trunc, bench.loc[:cut]), FrequencySet())
            m_full = comp_full.matrix_at(cut)
            m_cut = comp_cut.matrix_at(cut)
            for a in m_full.rows:
                assert np.array_equal(m_full.rows[a], m_cut.rows[a])

    def test_determinism(self, three_asset_panels):
        prices, bench = three_asset_panels
        c1 = SignalComputer(make_panels(prices, bench), FrequencySet())
        c2 = SignalComputer(make_panels(prices, bench), FrequencySet())
        for a in c1.cells:
            pd.testing.assert_frame_equal(c1.cells[a], c2.cells[a])

    def test_no_eligible_assets(self, three_asset_panels):
        prices, bench = three_asset_panels
        panels = make_panels(prices, bench)
        with pytest.raises(NoEligibleAssets):
            SignalComputer(panels, FrequencySet()).matrix_at("2010-01-04")

    def test_build_signal_matrix_one_shot(self, three_asset_panels):
        prices, bench = three_asset_panels
        panels = make_panels(prices, bench)
        m = build_signal_matrix(panels, bench.index[-1], FrequencySet())
        assert set(m.rows) == set(prices)

    def test_export_frame_shape(self, three_asset_panels):
        prices, bench = three_asset_panels
        comp = SignalComputer(make_panels(prices, bench), FrequencySet())
        frame = comp.export_frame(bench.index[-1])
        assert list(frame["asset_id"]) == ["A1", "A2", "A3"]
        assert {"momentum_vote", "trend_vote", "include"} <= set(frame.columns)
        assert frame.filter(like="momentum_").shape[1] == 7  # 6 cells + vote
