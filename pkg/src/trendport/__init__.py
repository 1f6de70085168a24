"""Deterministic multi-frequency trend/momentum portfolio backtesting.

Pipeline: price ingestion and calendar alignment -> relative-return chain
over asset/benchmark price ratios -> binary signal matrix with majority-vote
fusion -> inverse-tracking-error weights on a 10-trading-day rebalance
cadence -> drifted daily simulation with monthly fees -> performance
analytics panel.
"""

from .analytics import (
    annualized_return,
    annualized_volatility,
    calendar_year_table,
    growth_of_dollar,
    information_ratio,
    max_drawdown,
    metric_panel,
    rolling_excess,
    sharpe_modified,
    sortino_modified,
)
from .backtest import (
    BacktestResult,
    BlendSpec,
    StrategyConfig,
    apply_fees,
    blend_portfolios,
    run_backtest,
)
from .market_data import (
    AlignedPanel,
    AssetMeta,
    PriceSeries,
    align_panel,
    load_price_series,
    load_universe_manifest,
)
from .portfolio import (
    WeightVector,
    inverse_te_weights,
    rebalance_schedule,
    tracking_error,
)
from .returns import (
    DEFAULT_FREQUENCIES,
    FrequencySet,
    build_asset_panel,
    compound_returns,
    normalized_daily_returns,
    normalized_returns,
    price_ratio,
    relative_returns,
    rolling_volatility,
)
from .signals import (
    FusedDecision,
    SignalComputer,
    SignalMatrix,
    fuse_majority_vote,
    momentum_vote,
    spread_signal,
    trend_vote,
)

__version__ = "0.1.0"
