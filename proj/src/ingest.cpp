#include "nbp/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "json.hpp"
#include "nbp/errors.hpp"

namespace nbp {

namespace {

constexpr std::string_view kTradeHeader =
    "timestamp_ms,instrument,direction,amount,option_price_btc,implied_vol,"
    "index_price";
constexpr std::string_view kSpotHeader = "interval_end_ms,close,volume_usd";

constexpr std::array<std::string_view, 12> kMonths = {
    "JAN", "FEB", "MAR", "APR", "MAY", "JUN",
    "JUL", "AUG", "SEP", "OCT", "NOV", "DEC"};

constexpr Millis kExpiryHourUtc = 8;  // venue settlement time

bool parse_double(std::string_view s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_int64(std::string_view s, std::int64_t& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::string format_double(double v) {
    std::array<char, 32> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

/// Splits on commas into `out`; returns false on field-count mismatch.
bool split_fields(std::string_view line, std::span<std::string_view> out) {
    std::size_t field = 0;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (field >= out.size()) return false;
        out[field++] = line.substr(
            pos, comma == std::string_view::npos ? comma : comma - pos);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return field == out.size();
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

/// Shared row-level cleaning; returns false and sets `reason` to drop.
/// Bound and consistency violations that the venue could not emit are
/// "malformed"; the IV corridor has its own counter.
bool clean_trade(TradeTick& t, const ParsedInstrument& inst,
                 CleaningReport& report, std::string& reason) {
    t.expiry_ms = inst.expiry_ms;
    t.strike = inst.strike;
    t.option_type = inst.option_type;
    if (!std::isfinite(t.implied_vol) || t.implied_vol <= 0.0 ||
        t.implied_vol > 5.0) {
        ++report.dropped_iv_bounds;
        reason = "implied vol outside (0, 5]";
        return false;
    }
    if (!std::isfinite(t.amount) || t.amount <= 0.0) {
        ++report.dropped_malformed;
        reason = "non-positive amount";
        return false;
    }
    if (!std::isfinite(t.option_price) || t.option_price < 0.0) {
        ++report.dropped_malformed;
        reason = "negative option price";
        return false;
    }
    if (!std::isfinite(t.index_price) || t.index_price <= 0.0) {
        ++report.dropped_malformed;
        reason = "non-positive index price";
        return false;
    }
    if (t.expiry_ms <= t.timestamp_ms) {
        ++report.dropped_malformed;
        reason = "expiry not after trade";
        return false;
    }
    return true;
}

void finish_trades(TradeParseResult& r) {
    if (r.trades.empty())
        throw ParseError("no trades survived parsing and cleaning");
    std::stable_sort(r.trades.begin(), r.trades.end(),
                     [](const TradeTick& a, const TradeTick& b) {
                         return a.timestamp_ms < b.timestamp_ms;
                     });
    r.report.total_out = r.trades.size();
}

TradeParseResult parse_trades_csv(std::istream& in) {
    TradeParseResult result;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty trade file");
    strip_cr(line);
    if (line != kTradeHeader)
        throw ParseError("unexpected trade header: " + line);

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        ++result.report.total_in;

        std::array<std::string_view, 7> f;
        TradeTick t;
        std::string reason;
        if (!split_fields(line, f)) {
            reason = "expected 7 fields";
        } else if (!parse_int64(f[0], t.timestamp_ms)) {
            reason = "bad timestamp_ms";
        } else if (!parse_double(f[3], t.amount)) {
            reason = "bad amount";
        } else if (!parse_double(f[4], t.option_price)) {
            reason = "bad option_price_btc";
        } else if (!parse_double(f[5], t.implied_vol)) {
            reason = "bad implied_vol";
        } else if (!parse_double(f[6], t.index_price)) {
            reason = "bad index_price";
        }
        if (!reason.empty()) {
            ++result.report.dropped_malformed;
            result.report.issues.push_back({lineno, reason});
            continue;
        }

        try {
            t.direction = direction_from(f[2]);
        } catch (const Error&) {
            ++result.report.dropped_malformed;
            result.report.issues.push_back({lineno, "bad direction"});
            continue;
        }

        ParsedInstrument inst;
        try {
            inst = parse_instrument(f[1]);
        } catch (const ParseError& e) {
            const std::string_view what = e.what();
            if (what.find("missing option type") != std::string_view::npos) {
                ++result.report.dropped_missing_type;
                result.report.issues.push_back({lineno, "missing option type"});
            } else {
                ++result.report.dropped_malformed;
                result.report.issues.push_back({lineno, std::string(what)});
            }
            continue;
        }

        if (!clean_trade(t, inst, result.report, reason)) {
            result.report.issues.push_back({lineno, reason});
            continue;
        }
        result.trades.push_back(t);
    }
    finish_trades(result);
    return result;
}

TradeParseResult parse_trades_jsonl(std::istream& in) {
    TradeParseResult result;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        ++result.report.total_in;

        nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
        const auto num = [&](const char* key, double& out) {
            const auto it = row.find(key);
            if (it == row.end() || !it->is_number()) return false;
            out = it->get<double>();
            return true;
        };
        TradeTick t;
        std::string reason;
        double ts = 0.0;
        if (!row.is_object()) {
            reason = "not a JSON object";
        } else if (!num("timestamp_ms", ts)) {
            reason = "bad timestamp_ms";
        } else if (!row.contains("instrument") ||
                   !row["instrument"].is_string()) {
            reason = "bad instrument";
        } else if (!row.contains("direction") || !row["direction"].is_string()) {
            reason = "bad direction";
        } else if (!num("amount", t.amount)) {
            reason = "bad amount";
        } else if (!num("option_price_btc", t.option_price)) {
            reason = "bad option_price_btc";
        } else if (!num("implied_vol", t.implied_vol)) {
            reason = "bad implied_vol";
        } else if (!num("index_price", t.index_price)) {
            reason = "bad index_price";
        }
        if (!reason.empty()) {
            ++result.report.dropped_malformed;
            result.report.issues.push_back({lineno, reason});
            continue;
        }
        t.timestamp_ms = static_cast<Millis>(ts);

        try {
            t.direction = direction_from(row["direction"].get<std::string>());
        } catch (const Error&) {
            ++result.report.dropped_malformed;
            result.report.issues.push_back({lineno, "bad direction"});
            continue;
        }

        ParsedInstrument inst;
        try {
            inst = parse_instrument(row["instrument"].get<std::string>());
        } catch (const ParseError& e) {
            const std::string_view what = e.what();
            if (what.find("missing option type") != std::string_view::npos) {
                ++result.report.dropped_missing_type;
                result.report.issues.push_back({lineno, "missing option type"});
            } else {
                ++result.report.dropped_malformed;
                result.report.issues.push_back({lineno, std::string(what)});
            }
            continue;
        }

        if (!clean_trade(t, inst, result.report, reason)) {
            result.report.issues.push_back({lineno, reason});
            continue;
        }
        result.trades.push_back(t);
    }
    finish_trades(result);
    return result;
}

}  // namespace

ParsedInstrument parse_instrument(std::string_view name) {
    // ASSET-DDMMMYY-STRIKE-C|P, the venue's contract naming.
    std::array<std::string_view, 4> seg;
    std::size_t nseg = 0;
    std::size_t pos = 0;
    while (nseg < 4) {
        const std::size_t dash = name.find('-', pos);
        seg[nseg++] = name.substr(
            pos, dash == std::string_view::npos ? dash : dash - pos);
        if (dash == std::string_view::npos) break;
        pos = dash + 1;
        if (nseg == 4)
            throw ParseError("instrument has too many segments: " +
                             std::string(name));
    }
    if (nseg < 3)
        throw ParseError("instrument needs at least asset, expiry, strike: " +
                         std::string(name));

    ParsedInstrument out;
    if (seg[0].empty()) throw ParseError("instrument has an empty asset");
    for (char c : seg[0])
        if (!std::isalnum(static_cast<unsigned char>(c)))
            throw ParseError("instrument asset is not alphanumeric: " +
                             std::string(name));
    out.asset = std::string(seg[0]);

    const std::string_view date = seg[1];
    std::size_t digits = 0;
    while (digits < date.size() &&
           std::isdigit(static_cast<unsigned char>(date[digits])))
        ++digits;
    if (digits < 1 || digits > 2 || date.size() != digits + 5)
        throw ParseError("bad expiry date in instrument: " + std::string(name));
    int day = 0;
    for (std::size_t i = 0; i < digits; ++i) day = day * 10 + (date[i] - '0');
    const std::string_view mon = date.substr(digits, 3);
    int month = 0;
    for (std::size_t m = 0; m < kMonths.size(); ++m) {
        if (mon == kMonths[m]) {
            month = static_cast<int>(m) + 1;
            break;
        }
    }
    const int year = 2000 + (date[digits + 3] - '0') * 10 + (date[digits + 4] - '0');
    if (month == 0 || day < 1 || day > 31 ||
        !std::isdigit(static_cast<unsigned char>(date[digits + 3])) ||
        !std::isdigit(static_cast<unsigned char>(date[digits + 4])))
        throw ParseError("bad expiry date in instrument: " + std::string(name));
    out.expiry_ms = civil_to_ms(year, static_cast<unsigned>(month),
                                static_cast<unsigned>(day)) +
                    kExpiryHourUtc * kMillisPerHour;

    if (!parse_double(seg[2], out.strike) || !(out.strike > 0.0))
        throw ParseError("bad strike in instrument: " + std::string(name));

    if (nseg == 3 || seg[3].empty())
        throw ParseError("missing option type: " + std::string(name));
    if (seg[3] == "C")
        out.option_type = OptionType::Call;
    else if (seg[3] == "P")
        out.option_type = OptionType::Put;
    else
        throw ParseError("bad option type in instrument: " + std::string(name));
    return out;
}

std::string format_instrument(std::string_view asset, Millis expiry_ms,
                              double strike, OptionType type) {
    const CivilDate d = ms_to_civil(expiry_ms);
    std::string out(asset);
    out += '-';
    out += std::to_string(d.day);
    out += kMonths[d.month - 1];
    const int yy = d.year % 100;
    out += static_cast<char>('0' + yy / 10);
    out += static_cast<char>('0' + yy % 10);
    out += '-';
    out += format_double(strike);
    out += '-';
    out += to_string(type);
    return out;
}

TradeParseResult parse_trades(std::istream& in, TradeFormat format) {
    if (!in) throw IoError("trade stream is not readable");
    return format == TradeFormat::Csv ? parse_trades_csv(in)
                                      : parse_trades_jsonl(in);
}

TradeParseResult parse_trades_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const auto ext = path.extension().string();
    const TradeFormat format = (ext == ".jsonl" || ext == ".json")
                                   ? TradeFormat::Jsonl
                                   : TradeFormat::Csv;
    return parse_trades(in, format);
}

SpotParseResult parse_spot(std::istream& in) {
    if (!in) throw IoError("spot stream is not readable");
    SpotParseResult result;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty spot file");
    strip_cr(line);
    if (line != kSpotHeader) throw ParseError("unexpected spot header: " + line);

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        ++result.total_in;
        std::array<std::string_view, 3> f;
        SpotBar bar;
        std::string reason;
        if (!split_fields(line, f)) {
            reason = "expected 3 fields";
        } else if (!parse_int64(f[0], bar.interval_end_ms)) {
            reason = "bad interval_end_ms";
        } else if (!parse_double(f[1], bar.close)) {
            reason = "bad close";
        } else if (!parse_double(f[2], bar.volume_usd)) {
            reason = "bad volume_usd";
        } else if (!std::isfinite(bar.close) || bar.close <= 0.0) {
            reason = "non-positive close";
        } else if (!std::isfinite(bar.volume_usd) || bar.volume_usd < 0.0) {
            reason = "negative volume";
        }
        if (!reason.empty()) {
            ++result.dropped;
            result.issues.push_back({lineno, reason});
            continue;
        }
        result.bars.push_back(bar);
    }
    if (result.bars.empty()) throw ParseError("no usable spot bars");

    std::stable_sort(result.bars.begin(), result.bars.end(),
                     [](const SpotBar& a, const SpotBar& b) {
                         return a.interval_end_ms < b.interval_end_ms;
                     });
    // Duplicate timestamps: last row wins.
    std::vector<SpotBar> dedup;
    dedup.reserve(result.bars.size());
    for (const SpotBar& b : result.bars) {
        if (!dedup.empty() &&
            dedup.back().interval_end_ms == b.interval_end_ms)
            dedup.back() = b;
        else
            dedup.push_back(b);
    }
    result.bars = std::move(dedup);
    return result;
}

SpotParseResult parse_spot_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_spot(in);
}

void write_trades_csv(std::ostream& out, std::span<const TradeTick> trades,
                      std::string_view asset) {
    out << kTradeHeader << '\n';
    std::string line;
    for (const TradeTick& t : trades) {
        line.clear();
        line += std::to_string(t.timestamp_ms);
        line += ',';
        line += format_instrument(asset, t.expiry_ms, t.strike, t.option_type);
        line += ',';
        line += to_string(t.direction);
        line += ',';
        line += format_double(t.amount);
        line += ',';
        line += format_double(t.option_price);
        line += ',';
        line += format_double(t.implied_vol);
        line += ',';
        line += format_double(t.index_price);
        line += '\n';
        out << line;
    }
}

void write_trades_jsonl(std::ostream& out, std::span<const TradeTick> trades,
                        std::string_view asset) {
    std::string line;
    for (const TradeTick& t : trades) {
        line.clear();
        line += "{\"timestamp_ms\":";
        line += std::to_string(t.timestamp_ms);
        line += ",\"instrument\":\"";
        line += format_instrument(asset, t.expiry_ms, t.strike, t.option_type);
        line += "\",\"direction\":\"";
        line += to_string(t.direction);
        line += "\",\"amount\":";
        line += format_double(t.amount);
        line += ",\"option_price_btc\":";
        line += format_double(t.option_price);
        line += ",\"implied_vol\":";
        line += format_double(t.implied_vol);
        line += ",\"index_price\":";
        line += format_double(t.index_price);
        line += "}\n";
        out << line;
    }
}

void write_spot_csv(std::ostream& out, std::span<const SpotBar> bars) {
    out << kSpotHeader << '\n';
    for (const SpotBar& b : bars) {
        out << b.interval_end_ms << ',' << format_double(b.close) << ','
            << format_double(b.volume_usd) << '\n';
    }
}

}  // namespace nbp
