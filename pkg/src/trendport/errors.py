"""Exception hierarchy for the trendport package.

Three broad families map onto CLI exit codes: ConfigError (bad manifest or
strategy configuration), DataError (bad or insufficient input data), and
EngineError (failures raised while computing).
"""


class TrendportError(Exception):
    """Base class for all trendport errors."""


class ConfigError(TrendportError):
    """Invalid manifest or strategy configuration."""


class DataError(TrendportError):
    """Invalid or unusable input data."""


class EngineError(TrendportError):
    """Computation failed on otherwise valid inputs."""


# --- market data ---------------------------------------------------------

class MalformedRow(DataError):
    """A price file row has an unparseable date or non-positive price."""


class EmptySeries(DataError):
    """A series with no observations where at least one is required."""


class DuplicateDate(DataError):
    """A price series contains the same date twice."""


class NoBenchmarkCoverage(DataError):
    """No benchmark series spans the full study window."""


class ExcessiveGaps(DataError):
    """Forward-fill fraction for a series exceeds the configured threshold."""


class DateOutsideCalendar(EngineError):
    """Queried date is not a member of the trading calendar."""


# --- returns engine ------------------------------------------------------

class MisalignedSeries(DataError):
    """Two series expected to share dates do not."""


class SeriesTooShort(DataError):
    """Series shorter than the operation's minimum length."""


class NonPositiveGrowthFactor(EngineError):
    """A return of -100% or worse makes compounding undefined."""


class WindowExceedsSeries(EngineError):
    """Rolling window longer than the series."""


class WindowTooSmall(EngineError):
    """Rolling window below the minimum of 2 observations."""


# --- signal engine -------------------------------------------------------

class DegenerateMean(EngineError):
    """Mean return too close to zero for the spread to be meaningful."""


class EmptyRow(EngineError):
    """A vote was requested over an empty cell row."""


class NoEligibleAssets(EngineError):
    """No asset is available at the requested evaluation date."""


# --- portfolio -----------------------------------------------------------

class ZeroTrackingError(EngineError):
    """Tracking error is exactly zero where a positive value is required."""


class StartOutsideCalendar(EngineError):
    """Rebalance schedule start date is not a calendar member."""


# --- backtest ------------------------------------------------------------

class ConfigUniverseUnavailable(ConfigError):
    """Configured universe references assets missing from the panel."""


class InsufficientHistory(DataError):
    """Panel too short for any asset to reach the first rebalance."""


class CalendarMismatch(DataError):
    """Component results do not share a calendar."""


# --- analytics -----------------------------------------------------------

class ZeroVolatility(EngineError):
    """Volatility is zero; ratio undefined."""


class ZeroDownside(EngineError):
    """No negative returns; downside deviation is zero."""


class ZeroDrawdown(EngineError):
    """Maximum drawdown is zero; ratio undefined."""


# --- cli -----------------------------------------------------------------

class MissingResultFiles(DataError):
    """A result directory lacks the files a report needs."""
