#include "nbp/ivcurve.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "nbp/errors.hpp"
#include "nbp/option_math.hpp"

namespace nbp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 1970-01-01 is a Thursday; day 4 is the first Monday.
constexpr std::int64_t kFirstMonday = 4;

std::int64_t floor_div(std::int64_t num, std::int64_t den) {
    std::int64_t q = num / den;
    if (num % den != 0 && ((num < 0) != (den < 0))) --q;
    return q;
}

Millis week_end_ms(Millis ts) {
    const std::int64_t day = floor_div(ts, kMillisPerDay);
    const std::int64_t week = floor_div(day - kFirstMonday, 7);
    return ((week + 1) * 7 + kFirstMonday) * kMillisPerDay;
}

Millis year_end_ms(Millis ts) {
    return civil_to_ms(utc_year(ts) + 1, 1, 1);
}

std::string fmt(double v) {
    std::array<char, 32> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string date_of(Millis ms) {
    const CivilDate d = ms_to_civil(ms);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", d.year, d.month, d.day);
    return buf;
}

/// Annualized vol of the daily midnight-to-midnight returns inside
/// [start, end]; NaN when fewer than one full return is available.
double window_realized_vol(std::span<const SpotBar> bars, Millis start,
                           Millis end) {
    if (bars.empty()) return kNaN;
    std::vector<double> closes;
    Millis boundary = floor_to_day(start);
    if (boundary < start) boundary += kMillisPerDay;
    const Millis last_bar = bars.back().interval_end_ms;
    std::size_t i = 0;
    double last = kNaN;
    while (boundary <= end && boundary <= last_bar) {
        while (i < bars.size() && bars[i].interval_end_ms <= boundary) {
            last = bars[i].close;
            ++i;
        }
        if (std::isfinite(last)) closes.push_back(last);
        boundary += kMillisPerDay;
    }
    if (closes.size() < 2) return kNaN;
    std::vector<double> returns(closes.size() - 1);
    for (std::size_t r = 0; r + 1 < closes.size(); ++r)
        returns[r] = std::log(closes[r + 1] / closes[r]);
    return realized_vol(returns);
}

}  // namespace

int curve_category(OptionType type, Moneyness m) {
    if (m == Moneyness::Excluded)
        throw DomainError("excluded moneyness has no curve category");
    if (type == OptionType::Call) {
        switch (m) {
            case Moneyness::DITM: return 1;
            case Moneyness::ITM: return 2;
            case Moneyness::ATM: return 3;
            case Moneyness::OTM: return 4;
            case Moneyness::DOTM: return 5;
            default: break;
        }
    } else {
        switch (m) {
            case Moneyness::DOTM: return 1;
            case Moneyness::OTM: return 2;
            case Moneyness::ATM: return 3;
            case Moneyness::ITM: return 4;
            case Moneyness::DITM: return 5;
            default: break;
        }
    }
    throw DomainError("unreachable moneyness");
}

CurveStats curve_stats(const std::array<double, 5>& mean_iv,
                       double realized_vol_value) {
    for (int c : {2, 3, 4}) {
        if (!std::isfinite(mean_iv[c - 1]))
            throw DomainError("curve category " + std::to_string(c) +
                              " is empty");
    }
    CurveStats s;
    s.level = mean_iv[2];
    if (!(s.level > 0.0)) throw DomainError("curve level must be positive");
    s.left_slope = (mean_iv[2] - mean_iv[1]) / s.level;
    s.right_slope = (mean_iv[3] - mean_iv[2]) / s.level;
    s.vol_spread = std::isfinite(realized_vol_value)
                       ? realized_vol_value - s.level
                       : kNaN;
    for (int c = 0; c < 5; ++c)
        s.relative_iv[c] =
            std::isfinite(mean_iv[c]) ? mean_iv[c] / s.level : kNaN;
    return s;
}

CurveSeries curve_series(std::span<const TradeTick> trades,
                         std::span<const ClassifiedTrade> classified,
                         CurveWindow window, std::span<const SpotBar> bars) {
    struct WindowAcc {
        std::array<double, 5> iv_sum{};
        std::array<std::int64_t, 5> count{};
        std::int64_t trades = 0;
    };
    std::map<Millis, WindowAcc> acc;
    for (const ClassifiedTrade& c : classified) {
        const TradeTick& t = trades[c.trade_index];
        const Millis end = window == CurveWindow::Weekly
                               ? week_end_ms(t.timestamp_ms)
                               : year_end_ms(t.timestamp_ms);
        WindowAcc& w = acc[end];
        const int cat = curve_category(t.option_type, c.moneyness);
        w.iv_sum[cat - 1] += t.implied_vol;
        ++w.count[cat - 1];
        ++w.trades;
    }

    CurveSeries out;
    for (const auto& [end, w] : acc) {
        const Millis start = window == CurveWindow::Weekly
                                 ? end - 7 * kMillisPerDay
                                 : civil_to_ms(utc_year(end - 1), 1, 1);
        std::array<double, 5> mean{};
        for (int c = 0; c < 5; ++c)
            mean[c] = w.count[c] > 0
                          ? w.iv_sum[c] / static_cast<double>(w.count[c])
                          : kNaN;
        bool viable = true;
        for (int c : {2, 3, 4}) {
            if (!std::isfinite(mean[c - 1])) {
                out.notes.push_back("window ending " + date_of(end) +
                                    ": no trades in curve category " +
                                    std::to_string(c));
                viable = false;
            }
        }
        if (!viable) continue;

        CurveRow row;
        row.window_end = end;
        row.mean_iv = mean;
        row.trades = w.trades;
        row.stats = curve_stats(mean, window_realized_vol(bars, start, end));
        out.rows.push_back(row);
    }
    return out;
}

void write_curve_csv(std::ostream& out, const CurveSeries& series) {
    out << "window_end,level,left_slope,right_slope,vol_spread,relative_iv_1,"
           "relative_iv_2,relative_iv_3,relative_iv_4,relative_iv_5\n";
    const auto field = [](double v) {
        return std::isfinite(v) ? fmt(v) : std::string();
    };
    for (const CurveRow& r : series.rows) {
        out << r.window_end << ',' << field(r.stats.level) << ','
            << field(r.stats.left_slope) << ',' << field(r.stats.right_slope)
            << ',' << field(r.stats.vol_spread);
        for (int c = 0; c < 5; ++c) out << ',' << field(r.stats.relative_iv[c]);
        out << '\n';
    }
}

}  // namespace nbp
