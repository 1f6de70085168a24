"""Return, compounding, normalization, and rolling-volatility kernels.

The chain runs over the asset-to-benchmark price ratio:

    ratio -> relative returns (percent)
          -> compounded relative return path (level, CR_0 = 1)
          -> daily normalized returns (percent)
          -> per-frequency normalized returns (fraction)
          -> per-frequency rolling volatility and mean (percent)

Units are mixed by construction: the daily chain is in percent while the
multi-day normalized returns are fractions. Every series name and docstring
states its unit, and `PCT`/`FRAC` tags are attached to exported frames so
nothing silently picks up a 100x error.

Rolling windows are computed per-window (exact two-pass arithmetic over a
strided view), not with sliding accumulators, so a value at date t is a pure
function of the window ending at t. Truncating a series therefore reproduces
every earlier output bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view

from .errors import (
    MisalignedSeries,
    NonPositiveGrowthFactor,
    SeriesTooShort,
    WindowExceedsSeries,
    WindowTooSmall,
)

# Unit tags for exported series.
PCT = "percent"
FRAC = "fraction"

# Daily through annual, in trading days.
DEFAULT_FREQUENCIES = (1, 5, 21, 63, 126, 252)


def _values(x) -> np.ndarray:
    if isinstance(x, pd.Series):
        return x.to_numpy(dtype=float)
    return np.asarray(x, dtype=float)


def price_ratio(asset: pd.Series, benchmark: pd.Series) -> pd.Series:
    """Pointwise asset / benchmark price ratio on shared dates."""
    if not asset.index.equals(benchmark.index):
        raise MisalignedSeries(
            f"asset and benchmark dates differ "
            f"({len(asset)} vs {len(benchmark)} observations)"
        )
    out = asset / benchmark
    out.name = f"{asset.name}/{benchmark.name}"
    return out


def relative_returns(ratio) -> np.ndarray:
    """Percent change of the price ratio; length = input length - 1."""
    p = _values(ratio)
    if len(p) < 2:
        raise SeriesTooShort(f"need at least 2 observations, got {len(p)}")
    return (p[1:] - p[:-1]) / p[:-1] * 100.0


def compound_returns(returns_pct, initial: float = 1.0) -> np.ndarray:
    """Compounded level path from percent returns.

    Output has length len(returns) + 1 with out[0] = initial.
    """
    r = _values(returns_pct)
    factors = 1.0 + r / 100.0
    if np.any(factors <= 0.0):
        i = int(np.argmax(factors <= 0.0))
        raise NonPositiveGrowthFactor(f"return at position {i} is <= -100% ({r[i]})")
    out = np.empty(len(r) + 1)
    out[0] = initial
    np.multiply.accumulate(factors, out=out[1:])
    out[1:] *= initial
    return out


def normalized_daily_returns(cr) -> np.ndarray:
    """Percent change of the compounded path; inverse of compound_returns."""
    c = _values(cr)
    if len(c) < 2:
        raise SeriesTooShort(f"need at least 2 observations, got {len(c)}")
    return (c[1:] - c[:-1]) / c[:-1] * 100.0


def normalized_returns(daily_pct, nu: int) -> np.ndarray:
    """Trailing nu-day geometric compounding of daily percent returns.

    Returns a fraction (not percent): prod(1 + r/100) - 1 over each window
    ending at t. Output length = len(daily) - nu + 1. nu=1 degenerates to
    daily/100.
    """
    r = _values(daily_pct)
    if nu < 1:
        raise WindowTooSmall(f"nu must be >= 1, got {nu}")
    if nu > len(r):
        raise WindowExceedsSeries(f"nu={nu} exceeds series length {len(r)}")
    factors = 1.0 + r / 100.0
    windows = sliding_window_view(factors, nu)
    return windows.prod(axis=1) - 1.0


def rolling_volatility(returns, window: int) -> np.ndarray:
    """Trailing sample standard deviation (divisor n-1) per window.

    Output length = len(returns) - window + 1; units follow the input.
    """
    x = _values(returns)
    if window < 2:
        raise WindowTooSmall(f"window must be >= 2, got {window}")
    if window > len(x):
        raise WindowExceedsSeries(f"window={window} exceeds series length {len(x)}")
    w = sliding_window_view(x, window)
    m = w.mean(axis=1)
    dev = w - m[:, None]
    return np.sqrt((dev * dev).sum(axis=1) / (window - 1))


def rolling_mean(values, window: int) -> np.ndarray:
    """Trailing mean per window; output length = len - window + 1."""
    x = _values(values)
    if window < 1:
        raise WindowTooSmall(f"window must be >= 1, got {window}")
    if window > len(x):
        raise WindowExceedsSeries(f"window={window} exceeds series length {len(x)}")
    return sliding_window_view(x, window).mean(axis=1)


@dataclass(frozen=True)
class FrequencySet:
    """Ordered trailing-window lengths in trading days; smallest must be 1."""

    values: tuple = DEFAULT_FREQUENCIES

    def __post_init__(self):
        v = tuple(int(x) for x in self.values)
        if not v or sorted(set(v)) != list(v):
            raise ValueError(f"frequencies must be strictly increasing, got {v}")
        if v[0] != 1:
            raise ValueError(f"smallest frequency must be 1, got {v[0]}")
        object.__setattr__(self, "values", v)

    def __iter__(self):
        return iter(self.values)

    @property
    def max(self):
        return self.values[-1]


@dataclass(frozen=True)
class AssetReturnPanel:
    """All derived return series for one asset against its benchmark.

    Index conventions (T = number of ratio dates):
      ratio, compounded        : all T dates
      rel_returns_pct, r1_pct  : dates[1:]
      norm_frac[nu]            : dates[nu:]       (first full nu-day window)
      vol_pct[nu], mean_pct[nu]: dates[nu + n - 1:] (window of n windows)
    """

    asset_id: str
    benchmark_id: str
    frequencies: FrequencySet
    ratio: pd.Series
    rel_returns_pct: pd.Series
    compounded: pd.Series
    r1_pct: pd.Series
    norm_frac: dict = field(default_factory=dict)
    vol_pct: dict = field(default_factory=dict)
    mean_pct: dict = field(default_factory=dict)


def build_asset_panel(
    asset: pd.Series,
    benchmark: pd.Series,
    frequencies: FrequencySet = FrequencySet(),
    vol_window: dict | None = None,
) -> AssetReturnPanel:
    """Run the full return chain for one asset.

    `vol_window` optionally overrides the per-frequency volatility window
    (default: the frequency itself). Volatility and mean series are built
    only for frequencies >= 5; the daily leg feeds them directly.
    """
    bench = benchmark.reindex(asset.index)
    if bench.isna().any():
        raise MisalignedSeries(
            f"{benchmark.name} missing dates covered by {asset.name}"
        )
    ratio = price_ratio(asset, bench)
    dates = ratio.index

    rel = relative_returns(ratio)
    cr = compound_returns(rel, initial=1.0)
    r1 = normalized_daily_returns(cr)

    rel_s = pd.Series(rel, index=dates[1:])
    cr_s = pd.Series(cr, index=dates)
    r1_s = pd.Series(r1, index=dates[1:])

    norm, vol, mean = {}, {}, {}
    for nu in frequencies:
        if nu == 1:
            norm[1] = r1_s / 100.0
            continue
        if nu > len(r1):
            continue  # asset too young for this horizon; cells default to 0
        nr = normalized_returns(r1, nu)
        norm[nu] = pd.Series(nr, index=dates[nu:])
        n = (vol_window or {}).get(nu, nu)
        if n >= 2 and n <= len(nr):
            nr_pct = nr * 100.0
            vol[nu] = pd.Series(rolling_volatility(nr_pct, n), index=dates[nu + n - 1:])
            mean[nu] = pd.Series(rolling_mean(nr_pct, n), index=dates[nu + n - 1:])

    return AssetReturnPanel(
        asset_id=str(asset.name),
        benchmark_id=str(benchmark.name),
        frequencies=frequencies,
        ratio=ratio,
        rel_returns_pct=rel_s,
        compounded=cr_s,
        r1_pct=r1_s,
        norm_frac=norm,
        vol_pct=vol,
        mean_pct=mean,
    )
