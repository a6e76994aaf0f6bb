#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "nbp/option_math.hpp"
#include "nbp/types.hpp"

namespace nbp {

/// Volatility plugged into the delta used for moneyness classification.
enum class SigmaSource { Rv15, Rv30, TradeIv };

struct ClassifyConfig {
    SigmaSource sigma_source = SigmaSource::Rv15;
    double rate = 0.0;
};

/// Per-trade derived quantities kept parallel to the source trade span.
struct ClassifiedTrade {
    std::uint32_t trade_index = 0;
    double delta = 0.0;
    Moneyness moneyness = Moneyness::Excluded;
    MaturityBucket maturity = MaturityBucket::Short;
    TodSlot tod = TodSlot::Asia;
    double flow_usd = 0.0;     // amount * index_price
    double dw_flow_usd = 0.0;  // flow_usd * |delta|
};

/// Computes delta per trade from the configured sigma source, classifies
/// moneyness / maturity / session, and converts flow to USD. Trades whose
/// |delta| falls in the excluded tails, or that predate a warm realized-vol
/// window, are skipped and counted under dropped_delta_bounds in `report`
/// (pass nullptr to discard the tallies). `rv` may be null only for
/// SigmaSource::TradeIv.
std::vector<ClassifiedTrade> classify_trades(std::span<const TradeTick> trades,
                                             const RealizedVolTracker* rv,
                                             const ClassifyConfig& cfg,
                                             CleaningReport* report);

inline constexpr int kMoneynessBands = 5;  // DOTM..DITM

/// Aggregation key at the finest granularity; coarser slices roll up.
struct BucketKey {
    std::int64_t interval = 0;  // floor(timestamp / width)
    Moneyness moneyness = Moneyness::ATM;
    OptionType option_type = OptionType::Call;
    MaturityBucket maturity = MaturityBucket::Short;
    TodSlot tod = TodSlot::Asia;
    auto operator<=>(const BucketKey&) const = default;
};

struct CellAggregate {
    double buy_dw = 0.0;    // delta-weighted USD, buyer-initiated
    double sell_dw = 0.0;   // delta-weighted USD, seller-initiated
    double flow_usd = 0.0;  // unweighted USD, both sides
    double iv_sum = 0.0;
    std::int64_t trades = 0;

    double total_dw() const { return buy_dw + sell_dw; }
};

/// Net buying pressure of one cell: delta-weighted buys minus sells.
double category_pressure(const CellAggregate& agg);

using AggregateMap = std::map<BucketKey, CellAggregate>;

/// Accumulates classified trades into interval cells. Accumulation follows
/// the spans' order, which is timestamp-ascending after ingest, so sums are
/// reproducible bit for bit.
AggregateMap bucket_trades(std::span<const TradeTick> trades,
                           std::span<const ClassifiedTrade> classified,
                           Millis width_ms);

/// Re-key aggregates onto a coarser interval; coarse width must be a
/// positive multiple of the fine width.
AggregateMap rebucket(const AggregateMap& fine, Millis fine_width_ms,
                      Millis coarse_width_ms);

/// Pressure decomposition for one moneyness band:
/// directional D_call = (A_call - A_put) / 2 (put side is its negation)
/// and volatility demand V = (A_call + A_put) / 2.
struct Decomposition {
    double d_call = 0.0;
    double d_put = 0.0;
    double v = 0.0;
};
Decomposition decompose(double a_call, double a_put);

/// D and V scaled by the band's delta-weighted total volume; exact zeros
/// when the band saw no volume.
struct RelativePressure {
    double rel_d = 0.0;
    double rel_v = 0.0;
};
RelativePressure relative_pressure(double d_call, double v, double total_dw);

/// Consecutive differences under the gap rule: the change at t is defined
/// only when both t-1 and t had at least one observation.
std::vector<double> change_series(std::span<const double> level,
                                  std::span<const std::int64_t> counts);
/// Same, treating any non-finite level as missing.
std::vector<double> change_series(std::span<const double> level);

struct IntervalGrid {
    Millis width_ms = kMillisPerHour;
    std::int64_t first = 0;  // index of the first interval (ts / width)
    std::int64_t count = 0;

    Millis start_ms(std::int64_t i) const { return (first + i) * width_ms; }
    Millis end_ms(std::int64_t i) const { return start_ms(i) + width_ms; }
    /// Offset within the grid, or -1 when outside.
    std::int64_t offset_of(Millis ts) const;
};

/// Spot bars folded onto a grid: log return over each interval and USD
/// volume within it. NaN where the bars leave gaps.
struct SpotSeries {
    std::vector<double> log_return;
    std::vector<double> volume_usd;
};
SpotSeries spot_series(std::span<const SpotBar> bars, const IntervalGrid& grid);

/// One moneyness/type cell across the grid.
struct CellSeries {
    std::vector<double> pressure;    // A, USD delta-weighted
    std::vector<double> mean_iv;     // decimal; NaN when no trades
    std::vector<double> delta_iv;    // scaled by iv_scale; gap rule applies
    std::vector<double> volume_dw;   // buy + sell delta-weighted USD
    std::vector<std::int64_t> trades;
};

/// Band-level roll-up across both option types.
struct GroupSeries {
    std::vector<double> d_call;     // directional demand, call sign
    std::vector<double> v;          // volatility demand
    std::vector<double> total_dw;   // TV
    std::vector<double> rel_d;
    std::vector<double> rel_v;
};

/// Everything the regression battery reads, for one maturity/session slice.
struct PressureFrame {
    IntervalGrid grid;
    MaturityBucket maturity = MaturityBucket::All;
    TodSlot tod = TodSlot::All;
    double iv_scale = 100.0;

    CellSeries cell[kMoneynessBands][2];  // [band][option type]
    GroupSeries group[kMoneynessBands];

    std::vector<double> imbalance;      // N: sum of cell pressures
    std::vector<double> mean_iv_all;    // per-trade mean across the slice
    std::vector<double> delta_iv_all;
    std::vector<std::int64_t> trades_all;
    std::vector<double> option_volume;        // unweighted USD
    std::vector<double> delta_option_volume;  // gap rule applies

    std::vector<double> spot_return;
    std::vector<double> spot_volume;
    std::vector<double> realized_vol;        // tracker value at interval end
    std::vector<double> delta_realized_vol;  // scaled by iv_scale
};

struct FrameInputs {
    std::span<const SpotBar> bars;
    const RealizedVolTracker* rv = nullptr;  // optional, rv series left NaN
    double iv_scale = 100.0;                 // 100 = percentage points
};

/// Builds the slice frame for (maturity, tod); All matches every bucket.
/// The grid spans the aggregates' interval range.
PressureFrame build_frame(const AggregateMap& aggs, Millis width_ms,
                          MaturityBucket maturity, TodSlot tod,
                          const FrameInputs& inputs);

/// Band index for series arrays (DOTM..DITM); Excluded is rejected upstream.
int band_index(Moneyness m);

}  // namespace nbp
