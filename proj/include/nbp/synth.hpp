#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbp/ingest.hpp"
#include "nbp/regress.hpp"
#include "nbp/types.hpp"

namespace nbp::synth {

/// Planted market-maker behavior.
///   NullNoise             no flow impact at all, quotes follow news only
///   LimitsToArbitrage     every trade moves quotes, impact decays (reverts)
///   VolatilityLearning    informed straddle flow moves the whole IV level
///                         permanently ahead of planted vol-state switches
///   DirectionalLearning   informed call/put pairs move the traded type's
///                         IV permanently, in the direction of planted drift
///   Mixed                 both learning channels at once
enum class Regime : std::uint8_t {
    NullNoise,
    LimitsToArbitrage,
    VolatilityLearning,
    DirectionalLearning,
    Mixed,
};

std::string_view to_string(Regime r);
Regime regime_from(std::string_view s);

struct UnderlyingParams {
    double s0 = 40000.0;
    double vol = 0.75;           // annualized diffusion vol (base state)
    double vol_high = 1.4;       // multiplicative vol states for the
    double vol_low = 0.7;        //   volatility-learning schedule
    double drift_mag = 1.5;      // |annualized log drift| in drift blocks
    double jump_intensity = 12;  // jumps per year
    double jump_sd = 0.08;       // log jump size sd
};

struct QuoteParams {
    double base_iv = 0.75;
    /// Hourly news step of the quote level (decimal). The level mean-reverts
    /// very slowly toward base_iv so long horizons stay inside the clamps.
    double news_sd = 0.010;
    double trade_noise_sd = 0.001;  // idiosyncratic per-quote noise
    double kappa = 0.4;             // hourly transient decay fraction
    double transient_impact = 0.8;  // decimal IV per net USD million, all flow
    double permanent_impact = 0.1;  // decimal IV per informed net USD million
    double iv_floor = 0.05;
    double iv_cap = 4.5;
};

struct FlowParams {
    double uninformed_per_hour = 20.0;
    double informed_per_hour = 6.0;  // while a signal is live
    int lead_hours = 24;             // informed lead before vol switches
    double median_amount = 0.4;      // BTC per trade, lognormal
    double amount_log_sd = 1.0;
    int block_min_hours = 96;        // planted state block lengths
    int block_max_hours = 240;
};

struct SynthConfig {
    Regime regime = Regime::NullNoise;
    int horizon_hours = 2000;
    std::uint64_t seed = 1;
    Millis start_ms = civil_to_ms(2021, 1, 1);  // first trading hour
    int spot_warmup_days = 16;  // spot history before trading begins
    UnderlyingParams underlying;
    QuoteParams quote;
    FlowParams flow;
};

/// Throws ConfigError naming the first offending field.
void validate_config(const SynthConfig& cfg);

struct Dataset {
    std::vector<TradeTick> trades;  // timestamp-ascending
    std::vector<SpotBar> spot;      // hourly, includes the warm-up stretch
    std::string truth_json;        // planted regime and parameters
};

/// Deterministic per (config, seed): identical bytes on every run.
Dataset generate(const SynthConfig& cfg);

/// Writes trades.(csv|jsonl), spot.csv and truth.json into dir.
void write_dataset(const Dataset& ds, const std::filesystem::path& dir,
                   TradeFormat format);

/// The slices whose fits feed evaluate_verdict: ATM pressure response for
/// both types plus volume-decomposition fits for ATM/OTM/DOTM x call/put.
/// Slices that cannot be fitted (too few usable rows, a degenerate design,
/// or a flat dependent) are skipped.
std::vector<RegressionResult> canonical_battery(const PressureFrame& frame,
                                                const OlsOptions& opts);

/// Full in-memory pipeline for one dataset: realized-vol tracker, delta
/// classification, hourly bucketing, canonical battery, verdict.
HypothesisVerdict analyze_dataset(const Dataset& ds,
                                  const VerdictConfig& vcfg = {});

struct RegimeRecovery {
    Regime regime = Regime::NullNoise;
    int seeds = 0;
    int limits = 0;       // seeds with the limits flag set
    int volatility = 0;
    int directional = 0;
    int failed = 0;       // analysis errors (counted as no flags)
};

struct RecoveryReport {
    std::vector<RegimeRecovery> rows;
    int horizon_hours = 0;
    std::uint64_t base_seed = 0;
};

/// Runs `n_seeds` independent datasets per regime (seeds base_seed + i) and
/// tallies verdict flags. `progress`, when given, gets one line per regime.
RecoveryReport validate_regimes(const SynthConfig& base, int n_seeds,
                                std::span<const Regime> regimes,
                                std::ostream* progress = nullptr);

std::string recovery_json(const RecoveryReport& report);

}  // namespace nbp::synth
