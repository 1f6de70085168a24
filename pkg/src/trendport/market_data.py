"""Price ingestion, validation, and calendar alignment.

All downstream computation runs off an AlignedPanel: every series shares a
master trading calendar (the union of benchmark dates), each asset carries
an availability date marking when it enters the investable universe, and
interior gaps are forward-filled while pre-inception history is never
fabricated.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import (
    ConfigError,
    DateOutsideCalendar,
    DuplicateDate,
    EmptySeries,
    ExcessiveGaps,
    MalformedRow,
    NoBenchmarkCoverage,
)

logger = logging.getLogger(__name__)

ASSET_CLASSES = ("Equity", "FixedIncome", "Alternative")

# Full-precision float formatting so that serialize -> reload round-trips
# observations exactly.
FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class AssetMeta:
    """Static description of one investable asset."""

    id: str
    asset_class: str
    subset_description: str = ""
    risk_factors: frozenset = frozenset()
    benchmark_id: str = ""
    inception_date: pd.Timestamp | None = None

    def __post_init__(self):
        if self.asset_class not in ASSET_CLASSES:
            raise ValueError(
                f"asset_class must be one of {ASSET_CLASSES}, got {self.asset_class!r}"
            )


@dataclass(frozen=True)
class PriceSeries:
    """Validated adjusted-close series for one asset or benchmark."""

    asset_id: str
    prices: pd.Series  # DatetimeIndex, strictly increasing, values > 0

    def __len__(self):
        return len(self.prices)


def load_price_series(source, asset_id: str | None = None) -> PriceSeries:
    """Load and validate a (date, adjusted_close) table.

    `source` may be a path or any file-like object pandas can read. Rows are
    sorted by date; a non-positive or unparseable price, an unparseable
    date, or a duplicate date raises with the offending row named.
    """
    if isinstance(source, (str, Path)):
        name = Path(source).stem if asset_id is None else asset_id
        try:
            raw = pd.read_csv(source, dtype=str)
        except FileNotFoundError as exc:
            raise MalformedRow(f"{name}: price file not found: {source}") from exc
    else:
        name = asset_id or "<buffer>"
        raw = pd.read_csv(source, dtype=str)

    cols = [c.strip().lower() for c in raw.columns]
    if "date" not in cols or "adjusted_close" not in cols:
        raise MalformedRow(
            f"{name}: expected columns (date, adjusted_close), got {list(raw.columns)}"
        )
    raw.columns = cols
    if len(raw) == 0:
        raise EmptySeries(f"{name}: no price rows")

    dates = pd.to_datetime(raw["date"], format="ISO8601", errors="coerce")
    bad = np.flatnonzero(dates.isna().to_numpy())
    if bad.size:
        i = int(bad[0])
        raise MalformedRow(f"{name} row {i + 2}: unparseable date {raw['date'].iloc[i]!r}")

    def _to_float(v):
        # float() is correctly rounded; pd.to_numeric's fast parser can be
        # off by 1 ulp, which breaks the exact serialize/reload round-trip.
        try:
            return float(v)
        except (TypeError, ValueError):
            return np.nan

    prices = raw["adjusted_close"].map(_to_float)
    bad = np.flatnonzero(~(prices.to_numpy() > 0.0))
    if bad.size:
        i = int(bad[0])
        raise MalformedRow(
            f"{name} row {i + 2}: price must be a positive number, "
            f"got {raw['adjusted_close'].iloc[i]!r}"
        )

    s = pd.Series(prices.to_numpy(float), index=pd.DatetimeIndex(dates), name=name)
    s = s.sort_index()
    dup = s.index.duplicated()
    if dup.any():
        d = s.index[dup][0]
        raise DuplicateDate(f"{name}: duplicate date {d.date()}")
    return PriceSeries(asset_id=name, prices=s)


@dataclass(frozen=True)
class AlignedPanel:
    """Calendar-aligned price series for assets and benchmarks.

    Immutable after construction; safe for concurrent reads. Asset series
    cover a contiguous suffix of the calendar starting at their
    availability date.
    """

    calendar: pd.DatetimeIndex
    series: dict = field(default_factory=dict)        # id -> pd.Series
    availability: dict = field(default_factory=dict)  # id -> pd.Timestamp
    benchmark_ids: frozenset = frozenset()
    fill_counts: dict = field(default_factory=dict)   # id -> interior ffill count

    @property
    def asset_ids(self):
        return [k for k in self.series if k not in self.benchmark_ids]

    def history(self, asset_id: str, through: pd.Timestamp) -> pd.Series:
        """Prices for `asset_id` at dates <= `through` only.

        This accessor is the no-look-ahead boundary: downstream code reads
        prices exclusively through it (or through `truncate`), so nothing
        can observe a price after its query date.
        """
        through = pd.Timestamp(through)
        return self.series[asset_id].loc[:through]

    def available_universe(self, date) -> set:
        """Assets whose availability date is <= date (inclusive boundary)."""
        date = pd.Timestamp(date)
        if date not in self.calendar:
            raise DateOutsideCalendar(f"{date.date()} not in panel calendar")
        return {
            a for a in self.asset_ids if self.availability[a] <= date
        }

    def truncate(self, through) -> "AlignedPanel":
        """Panel restricted to dates <= `through`."""
        through = pd.Timestamp(through)
        cal = self.calendar[self.calendar <= through]
        series = {k: s.loc[:through] for k, s in self.series.items()}
        series = {k: s for k, s in series.items() if len(s)}
        avail = {k: v for k, v in self.availability.items() if k in series}
        return AlignedPanel(
            calendar=cal,
            series=series,
            availability=avail,
            benchmark_ids=self.benchmark_ids,
            fill_counts=dict(self.fill_counts),
        )

    def save(self, directory) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        meta_rows = []
        for name, s in sorted(self.series.items()):
            df = pd.DataFrame(
                {"date": s.index.strftime("%Y-%m-%d"), "adjusted_close": s.to_numpy()}
            )
            df.to_csv(directory / f"{name}.csv", index=False, float_format=FLOAT_FMT)
            meta_rows.append(
                {
                    "asset_id": name,
                    "is_benchmark": int(name in self.benchmark_ids),
                    "availability": self.availability[name].strftime("%Y-%m-%d"),
                    "fill_count": self.fill_counts.get(name, 0),
                }
            )
        pd.DataFrame(meta_rows).to_csv(directory / "_panel.csv", index=False)

    @classmethod
    def load(cls, directory) -> "AlignedPanel":
        directory = Path(directory)
        meta = pd.read_csv(directory / "_panel.csv")
        series, availability, fills = {}, {}, {}
        bench = set()
        for _, row in meta.iterrows():
            ps = load_price_series(directory / f"{row.asset_id}.csv", row.asset_id)
            series[row.asset_id] = ps.prices
            availability[row.asset_id] = pd.Timestamp(row.availability)
            fills[row.asset_id] = int(row.fill_count)
            if row.is_benchmark:
                bench.add(row.asset_id)
        calendar = pd.DatetimeIndex(sorted(set().union(*(series[b].index for b in bench))))
        return cls(
            calendar=calendar,
            series=series,
            availability=availability,
            benchmark_ids=frozenset(bench),
            fill_counts=fills,
        )


def align_panel(
    assets: list[PriceSeries],
    benchmarks: list[PriceSeries],
    max_gap_fraction: float = 0.02,
) -> AlignedPanel:
    """Align asset and benchmark series to a master calendar.

    The calendar is the union of benchmark dates; at least one benchmark
    must span it end to end. Assets join at their first observation
    (availability); interior missing dates are forward-filled and counted,
    raising ExcessiveGaps past `max_gap_fraction`.
    """
    if not benchmarks:
        raise NoBenchmarkCoverage("at least one benchmark series is required")
    calendar = pd.DatetimeIndex(
        sorted(set().union(*(b.prices.index for b in benchmarks)))
    )
    if not any(
        b.prices.index[0] == calendar[0] and b.prices.index[-1] == calendar[-1]
        for b in benchmarks
    ):
        raise NoBenchmarkCoverage("no benchmark spans the full study window")

    series, availability, fills = {}, {}, {}

    def _align_one(ps: PriceSeries, leading_ok: bool):
        s = ps.prices[ps.prices.index.isin(calendar)]
        if len(s) == 0:
            raise EmptySeries(f"{ps.asset_id}: no observations on the master calendar")
        first = s.index[0]
        target = calendar[calendar >= first] if leading_ok else calendar
        out = s.reindex(target)
        n_missing = int(out.isna().sum())
        if n_missing:
            frac = n_missing / len(out)
            if frac > max_gap_fraction:
                raise ExcessiveGaps(
                    f"{ps.asset_id}: {n_missing}/{len(out)} dates forward-filled "
                    f"({frac:.2%} > {max_gap_fraction:.2%})"
                )
            out = out.ffill()
            logger.info("%s: forward-filled %d interior dates", ps.asset_id, n_missing)
        series[ps.asset_id] = out
        availability[ps.asset_id] = out.index[0]
        fills[ps.asset_id] = n_missing

    for b in benchmarks:
        _align_one(b, leading_ok=False)
    for a in assets:
        _align_one(a, leading_ok=True)

    return AlignedPanel(
        calendar=calendar,
        series=series,
        availability=availability,
        benchmark_ids=frozenset(b.asset_id for b in benchmarks),
        fill_counts=fills,
    )


def load_universe_manifest(path) -> dict:
    """Read the universe table (id, asset_class, subset_description,
    risk_factors, benchmark_id, inception_date) into AssetMeta by id."""
    df = pd.read_csv(path, dtype=str).fillna("")
    metas = {}
    for _, row in df.iterrows():
        factors = frozenset(
            f.strip() for f in str(row.get("risk_factors", "")).split(";") if f.strip()
        )
        inception = (
            pd.Timestamp(row["inception_date"]) if row.get("inception_date") else None
        )
        meta = AssetMeta(
            id=row["id"].strip(),
            asset_class=row["asset_class"].strip(),
            subset_description=row.get("subset_description", ""),
            risk_factors=factors,
            benchmark_id=row.get("benchmark_id", "").strip(),
            inception_date=inception,
        )
        if meta.id in metas:
            raise ConfigError(f"universe manifest: duplicate id {meta.id}")
        metas[meta.id] = meta
    if not metas:
        raise EmptySeries(f"universe manifest {path} is empty")
    return metas
