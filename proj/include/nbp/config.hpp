#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nbp/ivcurve.hpp"
#include "nbp/pressure.hpp"
#include "nbp/regress.hpp"
#include "nbp/synth.hpp"
#include "nbp/types.hpp"

namespace nbp {

/// Sub-sample selections for the regression battery. Empty vector = no
/// restriction (years: use all; maturities/tods: fit the pooled slice only).
struct Filters {
    std::vector<int> years;
    std::vector<MaturityBucket> maturities;
    std::vector<TodSlot> tods;
    std::vector<Moneyness> bands;
    std::vector<OptionType> types;
};

/// Everything a run needs. Populated from defaults, then a flat key=value
/// config file, then command-line flags, in that order of precedence.
struct RunConfig {
    std::string trades_path;
    std::string spot_path;
    std::string out_dir = "out";

    Millis interval_ms = kMillisPerHour;          // 1h, 4h, 8h or 24h
    SigmaSource sigma_source = SigmaSource::Rv15;
    double rate = 0.0;
    double iv_scale = 100.0;                      // 100 percent, 1 decimal
    StdErrorMode se = StdErrorMode::Classical;
    double verdict_level = 0.05;
    CurveWindow curve_window = CurveWindow::Weekly;
    Filters filters;

    TradeFormat format = TradeFormat::Csv;        // simulate output format
    std::uint64_t seed = 1;
    int seeds = 100;                              // validate sample size
    synth::Regime regime = synth::Regime::NullNoise;
    int horizon_hours = 2000;
};

/// Applies one key=value pair; throws ConfigError for unknown keys or
/// unparseable values. Keys mirror the long flag names (interval, sigma,
/// scale, se, filters, out, seed, seeds, regime, horizon, trades, spot,
/// rate, level, curve_window, format).
void apply_kv(RunConfig& cfg, std::string_view key, std::string_view value);

/// Reads a flat key=value file ('#' comments, blank lines ignored).
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Filter string syntax: semicolon-separated key=v1,v2 groups, e.g.
/// "years=2020,2021;maturity=short,medium;tod=us".
void parse_filters(Filters& f, std::string_view text);

/// Canonical one-line-per-key rendering; equal configs render identically.
std::string config_fingerprint(const RunConfig& cfg);

/// FNV-1a 64 over the fingerprint, hex encoded. Embedded in every report.
std::string config_hash(const RunConfig& cfg);

Millis interval_from(std::string_view s);         // "1h","4h","8h","24h"
std::string_view interval_label(Millis width_ms);
SigmaSource sigma_source_from(std::string_view s);
std::string_view to_string(SigmaSource s);
StdErrorMode se_mode_from(std::string_view s);
std::string_view to_string(StdErrorMode m);

}  // namespace nbp
