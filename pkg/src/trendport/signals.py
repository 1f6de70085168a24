"""Spread signals, binary inclusion cells, and majority-vote fusion.

Two cell kinds per frequency feed the vote:

  momentum: trailing normalized return vs benchmark is strictly positive
            (level-vs-zero, line-based)
  trend:    compounded ratio is strictly above its own trailing moving
            average (crossover, curve-based)

A kind's vote is 1 only when strictly more than half of its cells are 1;
ties break to exclusion. The two votes are then combined ("both" = AND,
"either" = OR; default "both") into the include/exclude decision. Both the
cell criteria and the combination mode are config hooks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import DegenerateMean, EmptyRow, NoEligibleAssets
from .returns import AssetReturnPanel, FrequencySet, rolling_mean

MOMENTUM = "momentum"
TREND = "trend"
VOTE_MODES = ("both", "either")

# Below this magnitude the spread's mean-relative term is numerically
# meaningless; the cell is treated as undefined (0).
MEAN_EPSILON = 1e-9


def spread_signal(r1_pct: float, mean_pct: float, vol_pct: float) -> float:
    """Spread of the daily return over its frequency mean, plus scaled vol.

    All inputs in percent; output is a unitless diagnostic.
    """
    if abs(mean_pct) < MEAN_EPSILON:
        raise DegenerateMean(f"mean return {mean_pct} below epsilon {MEAN_EPSILON}")
    return (r1_pct - mean_pct) / mean_pct + vol_pct / 100.0


def spread_series(panel: AssetReturnPanel, nu: int) -> pd.Series:
    """Spread diagnostic across all dates where mean and vol are defined.

    Dates with a degenerate mean carry NaN.
    """
    mean = panel.mean_pct[nu]
    vol = panel.vol_pct[nu]
    r1 = panel.r1_pct.reindex(mean.index)
    m = mean.to_numpy()
    out = np.where(
        np.abs(m) < MEAN_EPSILON,
        np.nan,
        (r1.to_numpy() - m) / m + vol.to_numpy() / 100.0,
    )
    return pd.Series(out, index=mean.index, name=f"spread_{nu}")


def majority(cells) -> int:
    """1 iff strictly more than half the cells are 1; ties and empty-majority
    shortfalls give 0."""
    cells = np.asarray(cells)
    if cells.size == 0:
        raise EmptyRow("vote over empty cell row")
    return int(cells.sum() * 2 > cells.size)


def momentum_vote(row) -> int:
    return majority(row)


def trend_vote(row) -> int:
    return majority(row)


def fuse_majority_vote(m: int, t: int, mode: str = "both") -> int:
    if mode not in VOTE_MODES:
        raise ValueError(f"mode must be one of {VOTE_MODES}, got {mode!r}")
    if mode == "both":
        return int(bool(m) and bool(t))
    return int(bool(m) or bool(t))


@dataclass(frozen=True)
class SignalMatrix:
    """Binary cells for every available asset at one evaluation date."""

    date: pd.Timestamp
    columns: tuple                      # ((kind, nu), ...) identical across rows
    rows: dict = field(default_factory=dict)  # asset_id -> np.ndarray of 0/1


@dataclass(frozen=True)
class FusedDecision:
    asset_id: str
    momentum_vote: int
    trend_vote: int
    include: int
    date: pd.Timestamp


class SignalComputer:
    """Causal panel-wide evaluation of cells, votes, and inclusion.

    Every cell at date t is a trailing-window function of data at dates
    <= t, so recomputing on a truncated panel reproduces earlier bits
    exactly. Cells with insufficient history are 0.
    """

    def __init__(self, panels: dict, frequencies: FrequencySet, vote_mode: str = "both"):
        if vote_mode not in VOTE_MODES:
            raise ValueError(f"vote_mode must be one of {VOTE_MODES}, got {vote_mode!r}")
        self.panels = panels
        self.frequencies = frequencies
        self.vote_mode = vote_mode
        self.columns = tuple(
            (kind, nu) for kind in (MOMENTUM, TREND) for nu in frequencies
        )
        self.cells = {}      # asset -> DataFrame dates x columns, int8
        self.momentum = {}   # asset -> Series of votes
        self.trend = {}
        self.include = {}
        for asset_id, panel in panels.items():
            self._evaluate(asset_id, panel)

    def _evaluate(self, asset_id: str, panel: AssetReturnPanel):
        dates = panel.ratio.index
        cells = pd.DataFrame(
            0, index=dates, columns=pd.MultiIndex.from_tuples(self.columns), dtype=np.int8
        )
        for nu in self.frequencies:
            if nu == 1:
                mom = panel.r1_pct > 0.0
            elif nu in panel.norm_frac:
                mom = panel.norm_frac[nu] > 0.0
            else:
                mom = None
            if mom is not None:
                cells.loc[mom.index, (MOMENTUM, nu)] = mom.to_numpy(dtype=np.int8)

            cr = panel.compounded
            if nu <= len(cr):
                ma = rolling_mean(cr.to_numpy(), nu)
                above = cr.to_numpy()[nu - 1:] > ma
                cells.loc[dates[nu - 1:], (TREND, nu)] = above.astype(np.int8)
        self.cells[asset_id] = cells

        n = len(self.frequencies.values)
        mom_sum = cells[MOMENTUM].sum(axis=1)
        trd_sum = cells[TREND].sum(axis=1)
        self.momentum[asset_id] = (mom_sum * 2 > n).astype(np.int8)
        self.trend[asset_id] = (trd_sum * 2 > n).astype(np.int8)
        if self.vote_mode == "both":
            inc = self.momentum[asset_id] & self.trend[asset_id]
        else:
            inc = self.momentum[asset_id] | self.trend[asset_id]
        self.include[asset_id] = inc.astype(np.int8)

    def _row_assets(self, date: pd.Timestamp):
        date = pd.Timestamp(date)
        assets = [a for a, c in self.cells.items() if c.index[0] <= date]
        if not assets:
            raise NoEligibleAssets(f"no asset has history at {date.date()}")
        return date, sorted(assets)

    def matrix_at(self, date) -> SignalMatrix:
        """Cell row for every asset with any history at `date`."""
        date, assets = self._row_assets(date)
        rows = {}
        for a in assets:
            c = self.cells[a]
            loc = c.index.asof(date)
            rows[a] = c.loc[loc].to_numpy()
        return SignalMatrix(date=date, columns=self.columns, rows=rows)

    def decisions_at(self, date) -> list:
        date, assets = self._row_assets(date)
        out = []
        for a in assets:
            loc = self.cells[a].index.asof(date)
            out.append(
                FusedDecision(
                    asset_id=a,
                    momentum_vote=int(self.momentum[a].loc[loc]),
                    trend_vote=int(self.trend[a].loc[loc]),
                    include=int(self.include[a].loc[loc]),
                    date=date,
                )
            )
        return out

    def export_frame(self, date) -> pd.DataFrame:
        """Tabular signal matrix for one date: cells, votes, include."""
        matrix = self.matrix_at(date)
        decisions = {d.asset_id: d for d in self.decisions_at(date)}
        records = []
        for a in sorted(matrix.rows):
            rec = {"asset_id": a}
            for (kind, nu), v in zip(matrix.columns, matrix.rows[a]):
                rec[f"{kind}_{nu}"] = int(v)
            d = decisions[a]
            rec["momentum_vote"] = d.momentum_vote
            rec["trend_vote"] = d.trend_vote
            rec["include"] = d.include
            records.append(rec)
        return pd.DataFrame(records)


def build_signal_matrix(
    panels: dict, date, frequencies: FrequencySet, vote_mode: str = "both"
) -> SignalMatrix:
    """One-shot matrix construction (see SignalComputer for batch use)."""
    return SignalComputer(panels, frequencies, vote_mode).matrix_at(date)
