"""Smoke tests for the python bindings.

The numeric anchors repeat values the C++ unit tests pin against independent
oracles, so these only need to prove the binding layer forwards faithfully.
"""

import math

import pytest

import nbpress


def test_black_scholes_round_trip():
    price = nbpress.bs_price(
        spot=40000.0, strike=42000.0, tau=14 / 365, sigma=0.9, option_type="C"
    )
    assert 0.0 < price < 40000.0
    recovered = nbpress.implied_vol(
        price, spot=40000.0, strike=42000.0, tau=14 / 365, option_type="C"
    )
    assert recovered == pytest.approx(0.9, abs=1e-9)

    call = nbpress.bs_delta(spot=100.0, strike=100.0, tau=7 / 365, sigma=0.8)
    put = nbpress.bs_delta(
        spot=100.0, strike=100.0, tau=7 / 365, sigma=0.8, option_type="P"
    )
    assert call == pytest.approx(0.5220877045991594, abs=1e-12)
    assert put == pytest.approx(call - 1.0, abs=1e-15)


def test_scalar_helpers():
    assert nbpress.norm_cdf(0.0) == pytest.approx(0.5, abs=1e-15)
    assert nbpress.classify_moneyness(0.5) == "atm"
    assert nbpress.classify_moneyness(-0.07) == "dotm"
    assert nbpress.classify_moneyness(0.99) == "excluded"
    rv = nbpress.realized_vol([0.05] * 15)
    assert rv == pytest.approx(0.05 * math.sqrt(365.0), abs=1e-12)


def test_errors_surface_as_package_exception():
    with pytest.raises(nbpress.Error):
        nbpress.bs_delta(spot=-1.0, strike=100.0, tau=0.1, sigma=0.5)
    with pytest.raises(nbpress.Error):
        nbpress.analyze("no_such_file.csv")


def test_simulate_analyze_round_trip(tmp_path):
    truth = nbpress.simulate(
        regime="limits", horizon_hours=900, seed=1, out_dir=tmp_path
    )
    assert truth["regime"] == "limits"
    assert (tmp_path / "trades.csv").exists()
    assert (tmp_path / "spot.csv").exists()
    assert (tmp_path / "truth.json").exists()

    report = nbpress.analyze(
        tmp_path / "trades.csv", tmp_path / "spot.csv", interval="1h"
    )
    assert report["version"] == 1
    assert report["cleaning"]["total_out"] > 0
    labels = {r["label"] for r in report["results"]}
    assert "atm_pressure/atm_call/1h" in labels
    assert "vol_decomp/atm_put/1h" in labels
    assert report["verdict"]["limits_to_arbitrage"] is True

    # Same battery, coarser grid: the hourly horizon is unreachable and must
    # land in the notices rather than silently vanish.
    coarse = nbpress.analyze(
        tmp_path / "trades.csv", tmp_path / "spot.csv", interval="24h"
    )
    skipped = [n for n in coarse["notices"] if n["status"] == "skipped"]
    assert any("1h" in n["detail"] or "predictive/1h" == n["spec"]
               for n in skipped)


def test_validate_regimes_returns_tally():
    table = nbpress.validate_regimes(seeds=1, horizon_hours=300, base_seed=1)
    assert len(table["rows"]) == 5
    regimes = {row["regime"] for row in table["rows"]}
    assert regimes == {"null", "limits", "volatility", "directional", "mixed"}
