"""Deterministic synthetic dataset generator.

Produces a 21-asset, 26-year universe (7 assets per class plus two
benchmark indices) with staggered inceptions, a universe manifest, and a
ready-to-run manifest.yaml. Everything derives from one seeded RNG, so the
same seed always writes the same bytes; used by the regression suite and
handy for demos.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
import yaml

EQ_BENCH = "EQBM"
FI_BENCH = "FIBM"

# (class prefix, asset class, benchmark, annual alpha, beta, idio vol,
#  inception as fraction of the calendar)
_ASSET_SPECS = [
    ("EQ", "Equity", EQ_BENCH, 0.010, 1.00, 0.08, 0.00),
    ("EQ", "Equity", EQ_BENCH, -0.005, 1.10, 0.10, 0.00),
    ("EQ", "Equity", EQ_BENCH, 0.015, 0.90, 0.12, 0.04),
    ("EQ", "Equity", EQ_BENCH, 0.000, 1.20, 0.14, 0.10),
    ("EQ", "Equity", EQ_BENCH, 0.020, 0.80, 0.15, 0.18),
    ("EQ", "Equity", EQ_BENCH, -0.010, 1.05, 0.16, 0.26),
    ("EQ", "Equity", EQ_BENCH, 0.005, 0.95, 0.18, 0.33),
    ("FI", "FixedIncome", FI_BENCH, 0.004, 1.00, 0.02, 0.00),
    ("FI", "FixedIncome", FI_BENCH, 0.000, 0.50, 0.01, 0.00),
    ("FI", "FixedIncome", FI_BENCH, 0.008, 2.00, 0.05, 0.05),
    ("FI", "FixedIncome", FI_BENCH, 0.010, 1.20, 0.04, 0.12),
    ("FI", "FixedIncome", FI_BENCH, 0.015, 0.80, 0.06, 0.20),
    ("FI", "FixedIncome", FI_BENCH, 0.002, 1.10, 0.07, 0.28),
    ("FI", "FixedIncome", FI_BENCH, 0.006, 0.90, 0.08, 0.35),
    ("AL", "Alternative", FI_BENCH, 0.020, 0.30, 0.12, 0.00),
    ("AL", "Alternative", FI_BENCH, 0.010, 0.20, 0.10, 0.06),
    ("AL", "Alternative", FI_BENCH, 0.015, 0.40, 0.14, 0.14),
    ("AL", "Alternative", FI_BENCH, 0.000, 0.10, 0.20, 0.22),
    ("AL", "Alternative", FI_BENCH, 0.005, 0.15, 0.18, 0.30),
    ("AL", "Alternative", FI_BENCH, 0.012, 0.25, 0.16, 0.36),
    ("AL", "Alternative", FI_BENCH, 0.008, 0.35, 0.15, 0.40),
]

_SUBSETS = {"EQ": "Synthetic equity factor", "FI": "Synthetic bond factor",
            "AL": "Synthetic alternative factor"}
_FACTORS = {"EQ": "Beta", "FI": "Duration", "AL": "Diversifier"}


def _write_prices(path: Path, dates: pd.DatetimeIndex, prices: np.ndarray):
    df = pd.DataFrame(
        {"date": dates.strftime("%Y-%m-%d"), "adjusted_close": prices}
    )
    df.to_csv(path, index=False, float_format="%.10f")


def generate_dataset(
    outdir,
    seed: int = 1997,
    start: str = "1998-01-02",
    end: str = "2023-12-29",
) -> Path:
    """Write prices/, universe.csv, and manifest.yaml under `outdir`."""
    outdir = Path(outdir)
    prices_dir = outdir / "prices"
    prices_dir.mkdir(parents=True, exist_ok=True)
    dates = pd.bdate_range(start, end)
    T = len(dates)
    rng = np.random.default_rng(seed)

    bench_params = {EQ_BENCH: (0.07, 0.17), FI_BENCH: (0.035, 0.05)}
    bench_returns = {}
    for name, (mu, vol) in bench_params.items():
        r = mu / 252.0 + vol / np.sqrt(252.0) * rng.standard_normal(T - 1)
        prices = 100.0 * np.concatenate([[1.0], np.cumprod(1.0 + r)])
        bench_returns[name] = r
        _write_prices(prices_dir / f"{name}.csv", dates, prices)

    universe_rows = []
    counters = {"EQ": 0, "FI": 0, "AL": 0}
    for prefix, klass, bench, alpha, beta, idio, frac in _ASSET_SPECS:
        counters[prefix] += 1
        ticker = f"{prefix}{counters[prefix]:02d}"
        start_pos = int(round(frac * (T - 1)))
        n = T - start_pos
        eps = rng.standard_normal(n - 1)
        r = (
            alpha / 252.0
            + beta * bench_returns[bench][start_pos:]
            + idio / np.sqrt(252.0) * eps
        )
        prices = 50.0 * np.concatenate([[1.0], np.cumprod(1.0 + r)])
        _write_prices(prices_dir / f"{ticker}.csv", dates[start_pos:], prices)
        universe_rows.append(
            {
                "id": ticker,
                "asset_class": klass,
                "subset_description": f"{_SUBSETS[prefix]} {counters[prefix]}",
                "risk_factors": _FACTORS[prefix],
                "benchmark_id": bench,
                "inception_date": dates[start_pos].strftime("%Y-%m-%d"),
            }
        )

    pd.DataFrame(universe_rows).to_csv(outdir / "universe.csv", index=False)

    manifest = {
        "data_dir": "prices",
        "universe": "universe.csv",
        "output_dir": "results",
        "strategies": [
            {"name": "equity", "asset_class": "Equity", "benchmark": EQ_BENCH},
            {"name": "fixed_income", "asset_class": "FixedIncome", "benchmark": FI_BENCH},
            {"name": "alternatives", "asset_class": "Alternative", "benchmark": FI_BENCH},
        ],
        "blend": {
            "name": "moderate",
            "allocations": {"equity": 0.6, "fixed_income": 0.3, "alternatives": 0.1},
            "benchmark": {EQ_BENCH: 0.6, FI_BENCH: 0.4},
        },
    }
    with open(outdir / "manifest.yaml", "w") as fh:
        yaml.safe_dump(manifest, fh, sort_keys=False)
    return outdir / "manifest.yaml"
