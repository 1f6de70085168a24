import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trendport.market_data import PriceSeries, align_panel


def make_prices(dates, values, name="X"):
    return PriceSeries(asset_id=name, prices=pd.Series(values, index=dates, name=name))


def random_walk(rng, n, drift=0.0002, vol=0.01, start=100.0):
    r = drift + vol * rng.standard_normal(n - 1)
    return start * np.concatenate([[1.0], np.cumprod(1.0 + r)])


@pytest.fixture
def small_panel():
    """4 assets (one a clone of the benchmark, one late joiner) + benchmark."""
    rng = np.random.default_rng(42)
    dates = pd.bdate_range("2015-01-02", periods=1300)
    bench = random_walk(rng, len(dates), drift=0.0003, vol=0.008)
    assets = {
        "AAA": random_walk(rng, len(dates), drift=0.0004, vol=0.012),
        "BBB": random_walk(rng, len(dates), drift=0.0001, vol=0.015),
        "CLONE": bench.copy(),
    }
    late_start = 400
    late = random_walk(rng, len(dates) - late_start, drift=0.0005, vol=0.02)
    series = [make_prices(dates, v, k) for k, v in assets.items()]
    series.append(make_prices(dates[late_start:], late, "LATE"))
    return align_panel(series, [make_prices(dates, bench, "BM")])
