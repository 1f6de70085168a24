"""Day-by-day portfolio simulation with drift, scheduled rebalances, fees.

The loop is intentionally sequential (path dependence) and fully
deterministic: weights decided at a rebalance date use data strictly up to
that date's close and take effect on the next day's return. Between
rebalances holdings drift with prices (buy-and-hold); the cash bucket earns
zero. Fees are deducted on the last trading day of each calendar month at
annual_rate / 12.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import (
    CalendarMismatch,
    ConfigUniverseUnavailable,
    InsufficientHistory,
    NoBenchmarkCoverage,
)
from .market_data import AlignedPanel
from .portfolio import (
    DEFAULT_REBALANCE_PERIOD,
    DEFAULT_TE_WINDOW,
    inverse_te_weights,
    rebalance_schedule,
)
from .returns import FrequencySet, build_asset_panel, rolling_volatility
from .signals import SignalComputer

logger = logging.getLogger(__name__)

DEFAULT_FEE_RATE = 0.0055  # annual, deducted monthly


@dataclass(frozen=True)
class StrategyConfig:
    """Everything that determines one strategy run."""

    name: str
    benchmark_id: str
    asset_class: str | None = None      # select universe by class ...
    assets: tuple = ()                  # ... or explicitly by ticker
    frequencies: FrequencySet = FrequencySet()
    vote_mode: str = "both"
    te_window: int = DEFAULT_TE_WINDOW
    rebalance_period: int = DEFAULT_REBALANCE_PERIOD
    fee_rate_annual: float = DEFAULT_FEE_RATE

    def __post_init__(self):
        if self.fee_rate_annual < 0:
            raise ValueError(f"fee_rate_annual must be >= 0, got {self.fee_rate_annual}")


@dataclass
class BacktestResult:
    """Gross/net paths plus everything needed to audit the run."""

    config: StrategyConfig | None
    gross: pd.Series                    # daily fraction returns over calendar
    net: pd.Series
    benchmark: pd.Series
    holdings: pd.DataFrame              # date x (assets..., cash), post-close weights
    rebalances: pd.DataFrame            # one row per rebalance date
    weights_log: pd.DataFrame           # date, asset_id, weight, te, cash_weight
    signals: SignalComputer | None = None
    schedule: pd.DatetimeIndex | None = None


def _resolve_universe(config: StrategyConfig, panel: AlignedPanel, metas: dict) -> list:
    if config.assets:
        ids = list(config.assets)
    elif config.asset_class:
        ids = sorted(
            m.id for m in metas.values() if m.asset_class == config.asset_class
        )
    else:
        ids = sorted(panel.asset_ids)
    if not ids:
        raise ConfigUniverseUnavailable(f"{config.name}: empty universe")
    missing = [a for a in ids if a not in panel.series]
    if missing:
        raise ConfigUniverseUnavailable(f"{config.name}: assets not in panel: {missing}")
    return ids


def apply_fees(gross: pd.Series, fee_rate_annual: float) -> pd.Series:
    """Deduct the monthly fee on each month's final trading day.

    net_day = (1 + gross_day) * (1 - annual_rate / 12) - 1 on fee days,
    gross elsewhere.
    """
    if fee_rate_annual == 0.0:
        return gross.copy()
    net = gross.copy()
    is_month_end = np.empty(len(gross), dtype=bool)
    periods = gross.index.to_period("M")
    is_month_end[:-1] = periods[:-1] != periods[1:]
    is_month_end[-1] = True
    factor = 1.0 - fee_rate_annual / 12.0
    vals = net.to_numpy().copy()
    vals[is_month_end] = (1.0 + vals[is_month_end]) * factor - 1.0
    return pd.Series(vals, index=gross.index, name=gross.name)


def run_backtest(
    config: StrategyConfig, panel: AlignedPanel, metas: dict | None = None
) -> BacktestResult:
    """Simulate one strategy over the panel's full calendar."""
    metas = metas or {}
    asset_ids = _resolve_universe(config, panel, metas)
    if config.benchmark_id not in panel.series:
        raise ConfigUniverseUnavailable(
            f"{config.name}: benchmark {config.benchmark_id} not in panel"
        )
    bench = panel.series[config.benchmark_id]
    calendar = panel.calendar
    if bench.index[0] != calendar[0] or bench.index[-1] != calendar[-1]:
        raise NoBenchmarkCoverage(
            f"{config.benchmark_id} does not span the panel calendar"
        )

    # Per-asset derived series and signal bits; all trailing-window, causal.
    # Assets with fewer than 2 observations have no return history yet and
    # simply never become eligible.
    ret_panels = {
        a: build_asset_panel(panel.series[a], bench, config.frequencies)
        for a in asset_ids
        if len(panel.series[a]) >= 2
    }
    computer = SignalComputer(ret_panels, config.frequencies, config.vote_mode)

    T = len(calendar)
    A = len(asset_ids)
    bench_ret = bench.to_numpy()
    bench_ret = np.concatenate([[0.0], bench_ret[1:] / bench_ret[:-1] - 1.0])

    returns = np.zeros((T, A))
    include = np.zeros((T, A), dtype=bool)
    te_vals = np.full((T, A), np.nan)
    eligible_from = np.full(A, T, dtype=int)  # first calendar position with full history

    required = max(config.frequencies.max, config.te_window)
    for j, a in enumerate(asset_ids):
        if a not in ret_panels:
            continue
        s = panel.series[a]
        pos0 = calendar.get_loc(s.index[0])
        vals = s.to_numpy()
        r = vals[1:] / vals[:-1] - 1.0
        returns[pos0 + 1 : pos0 + len(vals), j] = r

        inc = computer.include[a]
        include[pos0 : pos0 + len(inc), j] = inc.to_numpy(dtype=bool)

        active = r - bench_ret[pos0 + 1 : pos0 + len(vals)]
        if len(active) >= config.te_window:
            te = rolling_volatility(active, config.te_window)
            te_vals[pos0 + config.te_window : pos0 + len(vals), j] = te

        if len(vals) > required:
            eligible_from[j] = pos0 + required

    if eligible_from.min() >= T:
        raise InsufficientHistory(
            f"{config.name}: no asset reaches {required} observations "
            f"(max frequency {config.frequencies.max} + tracking window {config.te_window})"
        )

    start = calendar[int(eligible_from.min())]
    schedule = rebalance_schedule(calendar, start, config.rebalance_period)
    rebal_pos = set(calendar.get_indexer(schedule))

    pos_grid = np.arange(T)[:, None]
    candidate = include & ~np.isnan(te_vals) & (pos_grid >= eligible_from[None, :])

    gross = np.zeros(T)
    w = np.zeros(A)
    cash = 1.0
    holdings = np.zeros((T, A + 1))
    holdings[:, A] = 1.0
    rebal_rows = []
    weight_rows = []

    def _rebalance(t: int):
        nonlocal w, cash
        date = calendar[t]
        sel = np.flatnonzero(candidate[t])
        te = {asset_ids[j]: float(te_vals[t, j]) for j in sel}
        wv = inverse_te_weights(te, date=date)
        w = np.zeros(A)
        for j in sel:
            w[j] = wv.weights[asset_ids[j]]
        cash = wv.cash_weight
        rebal_rows.append(
            {
                "date": date,
                "n_included": len(sel),
                "assets": ";".join(asset_ids[j] for j in sel),
            }
        )
        for j in sel:
            weight_rows.append(
                {
                    "date": date,
                    "asset_id": asset_ids[j],
                    "weight": w[j],
                    "te": float(te_vals[t, j]),
                    "cash_weight": cash,
                }
            )
        if not len(sel):
            weight_rows.append(
                {"date": date, "asset_id": "", "weight": 0.0, "te": np.nan,
                 "cash_weight": 1.0}
            )

    if 0 in rebal_pos:
        _rebalance(0)
    holdings[0, :A] = w
    holdings[0, A] = cash

    for t in range(1, T):
        r = returns[t]
        rp = float(w @ r)
        gross[t] = rp
        growth = 1.0 + rp
        w = w * (1.0 + r) / growth
        cash = cash / growth
        if t in rebal_pos:
            _rebalance(t)
        holdings[t, :A] = w
        holdings[t, A] = cash

    gross_s = pd.Series(gross, index=calendar, name="gross")
    net_s = apply_fees(gross_s, config.fee_rate_annual)
    net_s.name = "net"
    result = BacktestResult(
        config=config,
        gross=gross_s,
        net=net_s,
        benchmark=pd.Series(bench_ret, index=calendar, name="benchmark"),
        holdings=pd.DataFrame(holdings, index=calendar, columns=asset_ids + ["cash"]),
        rebalances=pd.DataFrame(rebal_rows),
        weights_log=pd.DataFrame(weight_rows),
        signals=computer,
        schedule=schedule,
    )
    logger.info(
        "%s: %d rebalances over %d days, %d assets", config.name, len(rebal_rows), T, A
    )
    return result


@dataclass(frozen=True)
class BlendSpec:
    """Static blend of strategy results against a blended index benchmark."""

    components: dict                       # name -> BacktestResult
    allocations: dict                      # name -> target fraction, sums to 1
    benchmark_weights: dict = field(default_factory=dict)  # ticker -> fraction
    benchmark_prices: dict = field(default_factory=dict)   # ticker -> pd.Series

    def __post_init__(self):
        total = sum(self.allocations.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"allocations must sum to 1, got {total}")
        if self.benchmark_weights:
            total = sum(self.benchmark_weights.values())
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"benchmark weights must sum to 1, got {total}")


def _blend_path(returns: np.ndarray, targets: np.ndarray, reset_pos: set) -> np.ndarray:
    """Blend component return paths with drifting allocations reset at
    `reset_pos` (positions, applied at that day's close)."""
    T = returns.shape[0]
    out = np.zeros(T)
    w = targets.copy() if 0 in reset_pos else targets.copy()
    for t in range(1, T):
        r = returns[t]
        rp = float(w @ r)
        out[t] = rp
        w = w * (1.0 + r) / (1.0 + rp)
        if t in reset_pos:
            w = targets.copy()
    return out


def blend_portfolios(spec: BlendSpec) -> BacktestResult:
    """Combine component strategies (and their benchmarks) at fixed target
    allocations, re-set to target on every component rebalance date."""
    names = sorted(spec.allocations)
    first = spec.components[names[0]]
    calendar = first.gross.index
    for n in names[1:]:
        if not spec.components[n].gross.index.equals(calendar):
            raise CalendarMismatch(f"component {n} is on a different calendar")

    reset_dates = sorted(
        set().union(
            *(set(spec.components[n].rebalances["date"]) for n in names
              if len(spec.components[n].rebalances))
        )
    )
    reset_pos = set(calendar.get_indexer(pd.DatetimeIndex(reset_dates)))
    targets = np.array([spec.allocations[n] for n in names])

    gross_in = np.column_stack([spec.components[n].gross.to_numpy() for n in names])
    net_in = np.column_stack([spec.components[n].net.to_numpy() for n in names])
    gross = _blend_path(gross_in, targets, reset_pos)
    net = _blend_path(net_in, targets, reset_pos)

    if spec.benchmark_weights:
        tickers = sorted(spec.benchmark_weights)
        cols = []
        for tk in tickers:
            p = spec.benchmark_prices[tk]
            if not p.index.equals(calendar):
                raise CalendarMismatch(f"benchmark {tk} is on a different calendar")
            v = p.to_numpy()
            cols.append(np.concatenate([[0.0], v[1:] / v[:-1] - 1.0]))
        bw = np.array([spec.benchmark_weights[tk] for tk in tickers])
        bench = _blend_path(np.column_stack(cols), bw, reset_pos)
    else:
        bench = np.zeros(len(calendar))

    holdings = pd.DataFrame(
        np.tile(targets, (len(calendar), 1)), index=calendar, columns=names
    )
    return BacktestResult(
        config=None,
        gross=pd.Series(gross, index=calendar, name="gross"),
        net=pd.Series(net, index=calendar, name="net"),
        benchmark=pd.Series(bench, index=calendar, name="benchmark"),
        holdings=holdings,
        rebalances=pd.DataFrame({"date": reset_dates}),
        weights_log=pd.DataFrame(
            [
                {"date": calendar[0], "asset_id": n, "weight": spec.allocations[n],
                 "te": np.nan, "cash_weight": 0.0}
                for n in names
            ]
        ),
        schedule=pd.DatetimeIndex(reset_dates),
    )
