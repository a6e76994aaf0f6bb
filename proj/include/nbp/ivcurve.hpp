#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nbp/pressure.hpp"
#include "nbp/types.hpp"

namespace nbp {

/// Smile position 1..5 in strike-ascending order, folding calls and puts:
///   1 = deep ITM calls + deep OTM puts      (lowest strikes)
///   2 = ITM calls + OTM puts
///   3 = ATM, both types
///   4 = OTM calls + ITM puts
///   5 = deep OTM calls + deep ITM puts      (highest strikes)
/// Excluded moneyness throws DomainError.
int curve_category(OptionType type, Moneyness m);

struct CurveStats {
    double level = 0.0;        // mean IV of category 3
    double left_slope = 0.0;   // (IV3 - IV2) / level
    double right_slope = 0.0;  // (IV4 - IV3) / level
    double vol_spread = 0.0;   // realized vol - level; NaN when RV unknown
    std::array<double, 5> relative_iv{};  // IV_c / IV3; NaN when c empty
};

/// Stats from per-category mean IVs (index = category - 1, NaN = empty).
/// Categories 2, 3 and 4 must be present; DomainError names the gap.
CurveStats curve_stats(const std::array<double, 5>& mean_iv,
                       double realized_vol);

enum class CurveWindow { Weekly, Yearly };

struct CurveRow {
    Millis window_end = 0;  // exclusive end of the window
    std::array<double, 5> mean_iv{};
    std::int64_t trades = 0;
    CurveStats stats;
};

struct CurveSeries {
    std::vector<CurveRow> rows;
    std::vector<std::string> notes;  // windows skipped and why
};

/// Per-window smile statistics over classified trades. Weekly windows are
/// Monday-aligned UTC; yearly windows are calendar years. The realized vol
/// entering vol_spread is computed from the daily closes inside the window.
CurveSeries curve_series(std::span<const TradeTick> trades,
                         std::span<const ClassifiedTrade> classified,
                         CurveWindow window, std::span<const SpotBar> bars);

void write_curve_csv(std::ostream& out, const CurveSeries& series);

}  // namespace nbp
