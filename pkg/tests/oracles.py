"""Independent brute-force reference implementations.

Everything here is a plain Python loop over the definitions, deliberately
sharing no code with the package, so tests can compare the optimized paths
against an implementation simple enough to be obviously correct.
"""

import math


def relative_returns(ratio):
    return [(ratio[t] - ratio[t - 1]) / ratio[t - 1] * 100.0 for t in range(1, len(ratio))]


def compound_returns(returns_pct, initial=1.0):
    out = [initial]
    for r in returns_pct:
        out.append(out[-1] * (1.0 + r / 100.0))
    return out


def normalized_daily(cr):
    return [(cr[t] - cr[t - 1]) / cr[t - 1] * 100.0 for t in range(1, len(cr))]


def normalized_returns(daily_pct, nu):
    out = []
    for t in range(nu - 1, len(daily_pct)):
        prod = 1.0
        for i in range(nu):
            prod *= 1.0 + daily_pct[t - i] / 100.0
        out.append(prod - 1.0)
    return out


def sample_std(xs):
    n = len(xs)
    m = sum(xs) / n
    return math.sqrt(sum((x - m) ** 2 for x in xs) / (n - 1))


def rolling_volatility(xs, window):
    return [sample_std(xs[t - window + 1 : t + 1]) for t in range(window - 1, len(xs))]


def rolling_mean(xs, window):
    return [sum(xs[t - window + 1 : t + 1]) / window for t in range(window - 1, len(xs))]


def spread(r1_pct, mean_pct, vol_pct):
    return (r1_pct - mean_pct) / mean_pct + vol_pct / 100.0


def tracking_error(p, b):
    diffs = [x - y for x, y in zip(p, b)]
    return sample_std(diffs)


def inverse_te_weights(te_list):
    inv = [1.0 / t for t in te_list]
    s = sum(inv)
    return [v / s for v in inv]


def annualized_return(returns, days_per_year=252):
    prod = 1.0
    for r in returns:
        prod *= 1.0 + r
    return prod ** (days_per_year / len(returns)) - 1.0


def annualized_volatility(returns, days_per_year=252):
    return sample_std(returns) * math.sqrt(days_per_year)


def downside_deviation(returns, days_per_year=252):
    total = sum(min(r, 0.0) ** 2 for r in returns)
    return math.sqrt(total / len(returns)) * math.sqrt(days_per_year)


def max_drawdown(returns):
    """O(n^2) peak-trough scan over the wealth path (initial wealth 1)."""
    wealth = [1.0]
    for r in returns:
        wealth.append(wealth[-1] * (1.0 + r))
    worst = 0.0
    for i in range(len(wealth)):
        for j in range(i + 1, len(wealth)):
            dd = 1.0 - wealth[j] / wealth[i]
            worst = max(worst, dd)
    return worst


def growth_of_dollar(returns):
    out = []
    w = 1.0
    for r in returns:
        w *= 1.0 + r
        out.append(w)
    return out


def signal_cells(prices, bench_prices, frequencies):
    """Recompute every (kind, nu) cell at the final date from raw prices.

    Returns a dict {("momentum", nu): bit, ("trend", nu): bit} evaluated at
    the last shared date, walking the whole definition chain by loops.
    """
    ratio = [p / b for p, b in zip(prices, bench_prices)]
    rel = relative_returns(ratio)
    cr = compound_returns(rel, 1.0)
    daily = normalized_daily(cr)
    cells = {}
    for nu in frequencies:
        # momentum: trailing nu-day normalized return strictly positive
        if nu == 1:
            mom = 1 if (len(daily) >= 1 and daily[-1] > 0.0) else 0
        elif len(daily) >= nu:
            prod = 1.0
            for i in range(nu):
                prod *= 1.0 + daily[-1 - i] / 100.0
            mom = 1 if prod - 1.0 > 0.0 else 0
        else:
            mom = 0
        cells[("momentum", nu)] = mom
        # trend: compounded path strictly above its own trailing nu-day mean
        if len(cr) >= nu:
            ma = sum(cr[-nu:]) / nu
            cells[("trend", nu)] = 1 if cr[-1] > ma else 0
        else:
            cells[("trend", nu)] = 0
    return cells
