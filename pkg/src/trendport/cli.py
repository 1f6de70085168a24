"""Command-line entry point: validate, backtest, report.

Everything that affects results lives in a declarative YAML manifest; flags
only select commands and paths. All outputs are plain CSV written at full
float precision, so reruns on the same inputs are byte-identical and
golden-file diffable.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime error.
"""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click
import pandas as pd
import yaml

from . import analytics
from .backtest import (
    BlendSpec,
    StrategyConfig,
    blend_portfolios,
    run_backtest,
)
from .errors import (
    ConfigError,
    DataError,
    EngineError,
    MissingResultFiles,
    TrendportError,
)
from .market_data import (
    FLOAT_FMT,
    align_panel,
    load_price_series,
    load_universe_manifest,
)
from .returns import FrequencySet

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4


@dataclass
class RunManifest:
    """Parsed manifest with paths resolved against its own location."""

    data_dir: Path
    universe: Path
    output_dir: Path
    strategies: list = field(default_factory=list)
    blend: dict | None = None


def load_manifest(path) -> RunManifest:
    path = Path(path)
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse manifest {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"manifest {path} must be a mapping")
    base = path.parent
    for key in ("data_dir", "universe", "output_dir", "strategies"):
        if key not in raw:
            raise ConfigError(f"manifest missing required key {key!r}")
    strategies = []
    for entry in raw["strategies"]:
        try:
            cfg = StrategyConfig(
                name=entry["name"],
                benchmark_id=entry["benchmark"],
                asset_class=entry.get("asset_class"),
                assets=tuple(entry.get("assets", ())),
                frequencies=FrequencySet(
                    tuple(entry.get("frequencies", FrequencySet().values))
                ),
                vote_mode=entry.get("vote_mode", "both"),
                te_window=int(entry.get("te_window", 63)),
                rebalance_period=int(entry.get("rebalance_period", 10)),
                fee_rate_annual=float(entry.get("fee_rate_annual", 0.0055)),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad strategy entry {entry!r}: {exc}") from exc
        strategies.append(cfg)
    if not strategies:
        raise ConfigError("manifest defines no strategies")
    names = [s.name for s in strategies]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate strategy names: {names}")
    blend = raw.get("blend")
    if blend is not None:
        for key in ("name", "allocations", "benchmark"):
            if key not in blend:
                raise ConfigError(f"blend missing required key {key!r}")
        unknown = set(blend["allocations"]) - set(names)
        if unknown:
            raise ConfigError(f"blend references unknown strategies: {sorted(unknown)}")
    return RunManifest(
        data_dir=base / raw["data_dir"],
        universe=base / raw["universe"],
        output_dir=base / raw["output_dir"],
        strategies=strategies,
        blend=blend,
    )


def _benchmark_ids(manifest: RunManifest, metas: dict) -> set:
    ids = {m.benchmark_id for m in metas.values() if m.benchmark_id}
    ids |= {s.benchmark_id for s in manifest.strategies}
    if manifest.blend:
        ids |= set(manifest.blend["benchmark"])
    return ids


def build_panel(manifest: RunManifest, metas: dict):
    bench_ids = _benchmark_ids(manifest, metas)
    benchmarks = [
        load_price_series(manifest.data_dir / f"{b}.csv", b) for b in sorted(bench_ids)
    ]
    assets = [
        load_price_series(manifest.data_dir / f"{a}.csv", a) for a in sorted(metas)
    ]
    return align_panel(assets, benchmarks)


def _write_result(result, outdir: Path):
    outdir.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        {
            "gross": result.gross,
            "net": result.net,
            "benchmark": result.benchmark,
        }
    )
    frame.index.name = "date"
    frame.to_csv(outdir / "returns.csv", float_format=FLOAT_FMT, date_format="%Y-%m-%d")

    h = result.holdings.copy()
    h.index.name = "date"
    h.to_csv(outdir / "holdings.csv", float_format=FLOAT_FMT, date_format="%Y-%m-%d")

    result.weights_log.to_csv(
        outdir / "weights.csv", index=False, float_format=FLOAT_FMT, date_format="%Y-%m-%d"
    )
    result.rebalances.to_csv(
        outdir / "rebalance_log.csv", index=False, date_format="%Y-%m-%d"
    )

    if result.signals is not None and result.schedule is not None:
        sig_dir = outdir / "signals"
        sig_dir.mkdir(exist_ok=True)
        for date in result.schedule:
            result.signals.export_frame(date).to_csv(
                sig_dir / f"{date.strftime('%Y-%m-%d')}.csv", index=False
            )


def run_manifest(manifest: RunManifest) -> list:
    """Run every strategy then the blend; returns the result directories."""
    metas = load_universe_manifest(manifest.universe)
    panel = build_panel(manifest, metas)
    outdirs = []
    results = {}
    for cfg in manifest.strategies:
        logger.info("running strategy %s", cfg.name)
        result = run_backtest(cfg, panel, metas)
        results[cfg.name] = result
        d = manifest.output_dir / cfg.name
        _write_result(result, d)
        outdirs.append(d)
    if manifest.blend:
        spec = BlendSpec(
            components={n: results[n] for n in manifest.blend["allocations"]},
            allocations=dict(manifest.blend["allocations"]),
            benchmark_weights=dict(manifest.blend["benchmark"]),
            benchmark_prices={
                tk: panel.series[tk] for tk in manifest.blend["benchmark"]
            },
        )
        result = blend_portfolios(spec)
        d = manifest.output_dir / manifest.blend["name"]
        _write_result(result, d)
        outdirs.append(d)
    return outdirs


def report_result_dir(result_dir) -> list:
    """Emit the metric panel, calendar table, and plot-data files."""
    result_dir = Path(result_dir)
    returns_file = result_dir / "returns.csv"
    if not returns_file.exists():
        raise MissingResultFiles(f"{result_dir} has no returns.csv")
    frame = pd.read_csv(returns_file, index_col="date", parse_dates=True)
    gross, net, bench = frame["gross"], frame["net"], frame["benchmark"]

    written = []

    panel = analytics.metric_panel(gross, net, bench)
    f = result_dir / "metrics.csv"
    panel.to_csv(f, float_format="%.6f")
    written.append(f)

    table = analytics.calendar_year_table(gross, net, bench)
    f = result_dir / "calendar_year.csv"
    table.to_csv(f, index=False, float_format="%.8f")
    written.append(f)

    for yrs in (1, 3, 5):
        ex = analytics.rolling_excess(gross, bench, yrs)
        f = result_dir / f"rolling_excess_{yrs}y.csv"
        out = ex.to_frame()
        out.index.name = "date"
        out.to_csv(f, float_format=FLOAT_FMT, date_format="%Y-%m-%d")
        written.append(f)

    wealth = pd.DataFrame(
        {
            "strategy_net": analytics.growth_of_dollar(net),
            "strategy_gross": analytics.growth_of_dollar(gross),
            "benchmark": analytics.growth_of_dollar(bench),
        }
    )
    wealth.index.name = "date"
    f = result_dir / "growth_of_dollar.csv"
    wealth.to_csv(f, float_format=FLOAT_FMT, date_format="%Y-%m-%d")
    written.append(f)
    return written


def validate_manifest(manifest_path) -> list:
    """Check paths, price files, universe entries, and config invariants.

    Returns a list of (severity, message) findings; empty means pass.
    """
    findings = []
    try:
        manifest = load_manifest(manifest_path)
    except ConfigError as exc:
        return [("config", str(exc))]

    if not manifest.data_dir.is_dir():
        findings.append(("data", f"data directory missing: {manifest.data_dir}"))
        return findings
    if not manifest.universe.is_file():
        findings.append(("data", f"universe manifest missing: {manifest.universe}"))
        return findings
    try:
        metas = load_universe_manifest(manifest.universe)
    except TrendportError as exc:
        return [("data", f"universe manifest: {exc}")]

    for name in sorted(set(metas) | _benchmark_ids(manifest, metas)):
        f = manifest.data_dir / f"{name}.csv"
        if not f.is_file():
            findings.append(("data", f"price file missing: {f}"))
            continue
        try:
            load_price_series(f, name)
        except TrendportError as exc:
            findings.append(("data", f"{f.name}: {exc}"))

    classes = {m.asset_class for m in metas.values()}
    for cfg in manifest.strategies:
        if cfg.asset_class and cfg.asset_class not in classes:
            findings.append(
                ("config", f"strategy {cfg.name}: no assets of class {cfg.asset_class}")
            )
        for a in cfg.assets:
            if a not in metas:
                findings.append(
                    ("config", f"strategy {cfg.name}: unknown asset {a}")
                )
    if manifest.blend:
        total = sum(manifest.blend["allocations"].values())
        if abs(total - 1.0) > 1e-9:
            findings.append(("config", f"blend allocations sum to {total}, expected 1"))
    return findings


@click.group()
def cli():
    """Deterministic trend/momentum portfolio backtesting."""
    logging.basicConfig(
        level=os.environ.get("TRENDPORT_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )


@cli.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
def validate(manifest):
    """Validate a run manifest and every input it references."""
    findings = validate_manifest(manifest)
    for severity, message in findings:
        click.echo(f"FAIL [{severity}] {message}")
    if findings:
        has_config = any(s == "config" for s, _ in findings)
        sys.exit(EXIT_CONFIG if has_config else EXIT_DATA)
    click.echo("OK: manifest and inputs validate")


@cli.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
def backtest(manifest):
    """Run every strategy in the manifest, then the blend."""
    try:
        outdirs = run_manifest(load_manifest(manifest))
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(EXIT_DATA)
    except EngineError as exc:
        click.echo(f"runtime error: {exc}", err=True)
        sys.exit(EXIT_RUNTIME)
    for d in outdirs:
        click.echo(f"wrote {d}")


@cli.command()
@click.argument(
    "result_dirs", nargs=-1, required=True, type=click.Path(exists=True, file_okay=False)
)
def report(result_dirs):
    """Generate the metric panel and plot data for result directories."""
    try:
        for d in result_dirs:
            for f in report_result_dir(d):
                click.echo(f"wrote {f}")
    except MissingResultFiles as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(EXIT_DATA)


@cli.command("make-dataset")
@click.argument("outdir", type=click.Path(file_okay=False))
@click.option("--seed", default=1997, show_default=True)
def make_dataset(outdir, seed):
    """Generate the bundled synthetic demo dataset."""
    from .synthetic import generate_dataset

    manifest = generate_dataset(outdir, seed=seed)
    click.echo(f"wrote {manifest}")


def main():
    cli()


if __name__ == "__main__":
    main()
