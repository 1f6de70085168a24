"""Tracking error, inverse-tracking-error weighting, rebalance schedule.

Weights are proportional to 1/TE so that each holding contributes roughly
the same relative risk: w_i * TE_i is constant across the book. The
biweekly cadence maps to every 10 trading days, which is deterministic
across holidays.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import MisalignedSeries, StartOutsideCalendar, WindowTooSmall

logger = logging.getLogger(__name__)

TRADING_DAYS_PER_YEAR = 252
DEFAULT_TE_WINDOW = 63          # one quarter of daily active returns
DEFAULT_REBALANCE_PERIOD = 10   # trading days ("every two weeks")
TE_FLOOR = 1e-6                 # keeps 1/TE finite for near-perfect trackers


def tracking_error(p, b, window: int | None = None, annualize: bool = False) -> float:
    """Sample standard deviation of centered active returns.

    `p` and `b` must be aligned return series (any consistent unit). When
    `window` is given, only the trailing `window` observations are used.
    A constant active spread centers away to TE = 0.
    """
    p = np.asarray(p, dtype=float)
    b = np.asarray(b, dtype=float)
    if p.shape != b.shape:
        raise MisalignedSeries(f"series lengths differ: {p.shape} vs {b.shape}")
    n = window if window is not None else len(p)
    if n < 2:
        raise WindowTooSmall(f"tracking error needs a window >= 2, got {n}")
    if n > len(p):
        raise WindowTooSmall(f"window {n} exceeds series length {len(p)}")
    active = (p - b)[-n:]
    te = float(np.std(active, ddof=1))
    if annualize:
        te *= np.sqrt(TRADING_DAYS_PER_YEAR)
    return te


@dataclass(frozen=True)
class WeightVector:
    """Target allocations at one rebalance date; weights + cash sum to 1."""

    date: pd.Timestamp
    weights: dict = field(default_factory=dict)  # asset_id -> weight in [0, 1]
    cash_weight: float = 0.0

    @property
    def total(self) -> float:
        return sum(self.weights.values()) + self.cash_weight


def inverse_te_weights(
    te: dict, date=None, floor: float = TE_FLOOR
) -> WeightVector:
    """Weights proportional to 1 / tracking error.

    TE values below `floor` are clamped (and logged) to keep the division
    finite. An empty inclusion set yields an all-cash vector.
    """
    date = pd.Timestamp(date) if date is not None else None
    if not te:
        return WeightVector(date=date, weights={}, cash_weight=1.0)
    inv = {}
    for asset, t in te.items():
        if t < floor:
            logger.warning("tracking error for %s (%g) clamped to floor %g", asset, t, floor)
            t = floor
        inv[asset] = 1.0 / t
    total = sum(inv.values())
    return WeightVector(
        date=date,
        weights={a: v / total for a, v in inv.items()},
        cash_weight=0.0,
    )


def rebalance_schedule(
    calendar: pd.DatetimeIndex, start_date, period: int = DEFAULT_REBALANCE_PERIOD
) -> pd.DatetimeIndex:
    """Every `period`-th trading day from `start_date` through calendar end."""
    start_date = pd.Timestamp(start_date)
    if start_date not in calendar:
        raise StartOutsideCalendar(f"{start_date.date()} not in calendar")
    if period < 1:
        raise ValueError(f"period must be >= 1 trading day, got {period}")
    start = calendar.get_loc(start_date)
    return calendar[start::period]
