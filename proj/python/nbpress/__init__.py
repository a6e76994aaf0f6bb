"""Net buying pressure and implied volatility curve analytics.

Thin wrapper over the C++ core. The heavy entry points return plain dicts
decoded from the same JSON documents the command line tool writes, so results
are identical across both interfaces.
"""

import json as _json

from ._core import (
    Error,
    bs_delta,
    bs_price,
    classify_moneyness,
    implied_vol,
    norm_cdf,
    realized_vol,
)
from . import _core as _c

__all__ = [
    "Error",
    "analyze",
    "bs_delta",
    "bs_price",
    "classify_moneyness",
    "implied_vol",
    "norm_cdf",
    "realized_vol",
    "simulate",
    "validate_regimes",
]


def analyze(trades, spot=None, **options):
    """Run the regression battery on a trade file.

    ``options`` take the config-file keys (interval, sigma, scale, se,
    filters, level, rate, curve_window) with string values, e.g.
    ``analyze("t.csv", "s.csv", interval="4h", se="robust")``.
    Returns the full report as a dict.
    """
    opts = {key: str(value) for key, value in options.items()}
    return _json.loads(
        _c.analyze_files(str(trades), str(spot) if spot else "", opts)
    )


def simulate(regime="null", horizon_hours=2000, seed=1, out_dir=None,
             format="csv"):
    """Generate one synthetic market; returns the planted truth as a dict.

    When ``out_dir`` is given, trades.(csv|jsonl), spot.csv and truth.json
    are written there.
    """
    truth = _c.simulate(
        regime, horizon_hours, seed, str(out_dir) if out_dir else "", format
    )
    return _json.loads(truth)


def validate_regimes(seeds=20, horizon_hours=2000, base_seed=1):
    """Recovery tally over fresh datasets for every planted regime."""
    return _json.loads(_c.validate_regimes(seeds, horizon_hours, base_seed))
