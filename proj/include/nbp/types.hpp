#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nbp/time.hpp"

namespace nbp {

enum class OptionType : std::uint8_t { Call, Put };

/// Trade initiator side. A "buy" means the aggressor bought the option.
enum class Direction : std::uint8_t { Buy, Sell };

/// Moneyness category from |delta|, left-open right-closed bands:
///   (0.02, 0.125] DOTM, (0.125, 0.375] OTM, (0.375, 0.625] ATM,
///   (0.625, 0.875] ITM, (0.875, 0.98] DITM, otherwise Excluded.
enum class Moneyness : std::uint8_t { DOTM, OTM, ATM, ITM, DITM, Excluded };

/// Days to expiry, ceiling of the ACT/365 year fraction times 365:
/// Short <= 7, Medium 8..21, Long >= 22. `All` marks an unfiltered slice.
enum class MaturityBucket : std::uint8_t { All, Short, Medium, Long };

/// Trading-session slot by UTC hour: Asia [0,8), Europe [8,16), US [16,24).
enum class TodSlot : std::uint8_t { All, Asia, Europe, US };

/// One option trade after instrument-name expansion.
struct TradeTick {
    Millis timestamp_ms = 0;
    Millis expiry_ms = 0;
    double strike = 0.0;             // USD
    OptionType option_type = OptionType::Call;
    Direction direction = Direction::Buy;
    double amount = 0.0;             // contracts, denominated in underlying units
    double option_price = 0.0;       // premium per contract, in underlying units
    double implied_vol = 0.0;        // annualized, decimal (0.8 = 80%)
    double index_price = 0.0;        // underlying index in USD at trade time
};

/// One spot bar: close and traded USD volume for the interval ending at
/// interval_end_ms (half-open (start, end]).
struct SpotBar {
    Millis interval_end_ms = 0;
    double close = 0.0;
    double volume_usd = 0.0;
};

/// A skipped input row and why.
struct RowIssue {
    std::size_t line = 0;  // 1-based physical line in the source file
    std::string reason;
};

/// Tallies from a cleaning pass. total_out must reconcile with total_in minus
/// the drop counters; tests enforce this.
struct CleaningReport {
    std::size_t total_in = 0;
    std::size_t total_out = 0;
    std::size_t dropped_missing_type = 0;
    std::size_t dropped_iv_bounds = 0;
    std::size_t dropped_delta_bounds = 0;
    std::size_t dropped_malformed = 0;
    std::vector<RowIssue> issues;

    std::size_t dropped_total() const {
        return dropped_missing_type + dropped_iv_bounds + dropped_delta_bounds +
               dropped_malformed;
    }
};

std::string_view to_string(OptionType t);
std::string_view to_string(Direction d);
std::string_view to_string(Moneyness m);
std::string_view to_string(MaturityBucket b);
std::string_view to_string(TodSlot s);

OptionType option_type_from(std::string_view s);
Direction direction_from(std::string_view s);
Moneyness moneyness_from(std::string_view s);
MaturityBucket maturity_bucket_from(std::string_view s);
TodSlot tod_slot_from(std::string_view s);

}  // namespace nbp
