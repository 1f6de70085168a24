"""Performance metrics: annualized return/vol, Sharpe and Sortino without a
risk-free leg, Calmar, max drawdown, tracking error, information ratio,
rolling excess returns, growth of a dollar, calendar-year tables, and the
multi-horizon metric panel.

All inputs are daily fraction returns; annualization uses 252 trading days
(config-exposed via the module constant).
"""

from __future__ import annotations

import numpy as np
import pandas as pd

from .errors import (
    EmptySeries,
    ZeroDownside,
    ZeroDrawdown,
    ZeroTrackingError,
    ZeroVolatility,
)
from .portfolio import tracking_error

TRADING_DAYS_PER_YEAR = 252

PANEL_ROWS = (
    "Composite Net Return (%)",
    "Composite Gross Return (%)",
    "Index Return (%)",
    "Excess Return (net)",
    "Excess Return (gross)",
    "Composite Standard Deviation",
    "Index Standard Deviation",
    "Composite Sharpe Ratio",
    "Index Sharpe Ratio",
    "Tracking Error",
    "Information Ratio",
)

HORIZONS = (
    ("1-Year", 1),
    ("3-Year", 3),
    ("5-Year", 5),
    ("10-Year", 10),
    ("Since Inception", None),
)


def _arr(returns) -> np.ndarray:
    x = np.asarray(returns, dtype=float) if not isinstance(returns, pd.Series) else returns.to_numpy()
    if x.size == 0:
        raise EmptySeries("empty return series")
    return x


def annualized_return(returns) -> float:
    """Geometric mean growth converted to a yearly rate (fraction/yr)."""
    r = _arr(returns)
    total = np.prod(1.0 + r)
    return float(total ** (TRADING_DAYS_PER_YEAR / len(r)) - 1.0)


def annualized_volatility(returns) -> float:
    """Sample standard deviation scaled by sqrt(252) (fraction/yr)."""
    r = _arr(returns)
    if len(r) < 2:
        raise EmptySeries("volatility needs at least 2 returns")
    return float(np.std(r, ddof=1) * np.sqrt(TRADING_DAYS_PER_YEAR))


def sharpe_modified(returns) -> float:
    """Annualized return over annualized volatility; no risk-free leg."""
    vol = annualized_volatility(returns)
    if vol == 0.0:
        raise ZeroVolatility("volatility is zero")
    return annualized_return(returns) / vol


def downside_deviation(returns) -> float:
    """Root mean square of negative returns over the full sample,
    sqrt(252)-scaled."""
    r = _arr(returns)
    d = np.minimum(r, 0.0)
    return float(np.sqrt((d * d).sum() / len(r)) * np.sqrt(TRADING_DAYS_PER_YEAR))


def sortino_modified(returns) -> float:
    """Annualized return over downside deviation; no risk-free leg."""
    dd = downside_deviation(returns)
    if dd == 0.0:
        raise ZeroDownside("no negative returns in sample")
    return annualized_return(returns) / dd


def growth_of_dollar(returns) -> pd.Series:
    """Cumulative wealth path starting from 1.0, one point per return."""
    if isinstance(returns, pd.Series):
        return (1.0 + returns).cumprod()
    r = _arr(returns)
    return pd.Series(np.cumprod(1.0 + r))


def max_drawdown(returns) -> float:
    """Largest peak-to-trough wealth loss, as a positive fraction.

    The starting wealth of 1.0 counts as the initial peak.
    """
    r = _arr(returns)
    wealth = np.cumprod(1.0 + r)
    peak = np.maximum(np.maximum.accumulate(wealth), 1.0)
    return float(np.max(1.0 - wealth / peak))


def calmar(returns) -> float:
    """Annualized return over absolute maximum drawdown."""
    dd = max_drawdown(returns)
    if dd == 0.0:
        raise ZeroDrawdown("no drawdown in sample")
    return annualized_return(returns) / dd


def information_ratio(p, b) -> float:
    """Annualized excess return over annualized tracking error."""
    p = _arr(p)
    b = _arr(b)
    te = tracking_error(p, b, annualize=True)
    if te == 0.0:
        raise ZeroTrackingError("tracking error is zero")
    return (annualized_return(p) - annualized_return(b)) / te


def rolling_excess(p: pd.Series, b: pd.Series, window_years: int) -> pd.Series:
    """Annualized strategy-minus-benchmark return over each trailing
    window of `window_years` * 252 days."""
    if not p.index.equals(b.index):
        raise EmptySeries("series must share an index")
    n = window_years * TRADING_DAYS_PER_YEAR
    if n > len(p):
        return pd.Series(dtype=float)
    pw = np.lib.stride_tricks.sliding_window_view(p.to_numpy(), n)
    bw = np.lib.stride_tricks.sliding_window_view(b.to_numpy(), n)
    power = TRADING_DAYS_PER_YEAR / n
    ex = np.prod(1.0 + pw, axis=1) ** power - np.prod(1.0 + bw, axis=1) ** power
    return pd.Series(ex, index=p.index[n - 1 :], name=f"excess_{window_years}y")


def calendar_year_table(
    gross: pd.Series, net: pd.Series, benchmark: pd.Series
) -> pd.DataFrame:
    """Compounded annual returns per calendar year, with excess columns.

    Partial first/last years are kept and flagged rather than dropped.
    """
    if not (gross.index.equals(net.index) and gross.index.equals(benchmark.index)):
        raise EmptySeries("series must share an index")
    years = gross.index.year
    rows = []
    for y in sorted(set(years), reverse=True):
        mask = years == y
        g = float(np.prod(1.0 + gross.to_numpy()[mask]) - 1.0)
        n = float(np.prod(1.0 + net.to_numpy()[mask]) - 1.0)
        b = float(np.prod(1.0 + benchmark.to_numpy()[mask]) - 1.0)
        first = gross.index[mask][0]
        last = gross.index[mask][-1]
        partial = not (first.month == 1 and last.month == 12)
        rows.append(
            {
                "year": int(y),
                "strategy_gross": g,
                "strategy_net": n,
                "benchmark": b,
                "excess_gross": g - b,
                "excess_net": n - b,
                "partial": int(partial),
            }
        )
    return pd.DataFrame(rows)


def metric_panel(
    gross: pd.Series, net: pd.Series, benchmark: pd.Series
) -> pd.DataFrame:
    """Annualized multi-horizon panel; rows follow the published layout.

    Return and deviation rows are in percent; ratio rows are unitless.
    Horizons longer than the sample are left absent (NaN).
    """
    data = {}
    for label, yrs in HORIZONS:
        if yrs is not None:
            n = yrs * TRADING_DAYS_PER_YEAR
            if n > len(gross):
                data[label] = {row: np.nan for row in PANEL_ROWS}
                continue
            g, nt, b = gross.iloc[-n:], net.iloc[-n:], benchmark.iloc[-n:]
        else:
            g, nt, b = gross, net, benchmark
        ann_g = annualized_return(g)
        ann_n = annualized_return(nt)
        ann_b = annualized_return(b)
        vol_n = annualized_volatility(nt)
        vol_b = annualized_volatility(b)
        te = tracking_error(nt.to_numpy(), b.to_numpy(), annualize=True)
        col = {
            "Composite Net Return (%)": ann_n * 100.0,
            "Composite Gross Return (%)": ann_g * 100.0,
            "Index Return (%)": ann_b * 100.0,
            "Excess Return (net)": (ann_n - ann_b) * 100.0,
            "Excess Return (gross)": (ann_g - ann_b) * 100.0,
            "Composite Standard Deviation": vol_n * 100.0,
            "Index Standard Deviation": vol_b * 100.0,
            "Composite Sharpe Ratio": ann_n / vol_n if vol_n else np.nan,
            "Index Sharpe Ratio": ann_b / vol_b if vol_b else np.nan,
            "Tracking Error": te * 100.0,
            "Information Ratio": (ann_n - ann_b) / te if te else np.nan,
        }
        data[label] = col
    out = pd.DataFrame(data, index=list(PANEL_ROWS))
    out.index.name = "Annualized"
    return out
