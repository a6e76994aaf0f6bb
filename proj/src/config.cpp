#include "nbp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <system_error>

#include "nbp/errors.hpp"

namespace nbp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                          s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                          s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = s.find(sep);
        out.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

template <typename T>
T parse_number(std::string_view v, const char* what) {
    T out{};
    const char* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end)
        throw ConfigError(std::string("bad value for ") + what + ": " +
                          std::string(v));
    return out;
}

std::string format_double(double v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

template <typename T, typename Fn>
std::string join_mapped(const std::vector<T>& xs, Fn&& name) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ',';
        out += name(xs[i]);
    }
    return out;
}

}  // namespace

Millis interval_from(std::string_view s) {
    if (s == "1h") return kMillisPerHour;
    if (s == "4h") return 4 * kMillisPerHour;
    if (s == "8h") return 8 * kMillisPerHour;
    if (s == "24h") return 24 * kMillisPerHour;
    throw ConfigError("unknown interval: " + std::string(s) +
                      " (want 1h, 4h, 8h or 24h)");
}

std::string_view interval_label(Millis width_ms) {
    if (width_ms == kMillisPerHour) return "1h";
    if (width_ms == 4 * kMillisPerHour) return "4h";
    if (width_ms == 8 * kMillisPerHour) return "8h";
    if (width_ms == 24 * kMillisPerHour) return "24h";
    throw ConfigError("no label for interval of " + std::to_string(width_ms) +
                      " ms");
}

SigmaSource sigma_source_from(std::string_view s) {
    if (s == "rv15") return SigmaSource::Rv15;
    if (s == "rv30") return SigmaSource::Rv30;
    if (s == "trade_iv") return SigmaSource::TradeIv;
    throw ConfigError("unknown sigma source: " + std::string(s) +
                      " (want rv15, rv30 or trade_iv)");
}

std::string_view to_string(SigmaSource s) {
    switch (s) {
        case SigmaSource::Rv15: return "rv15";
        case SigmaSource::Rv30: return "rv30";
        case SigmaSource::TradeIv: return "trade_iv";
    }
    return "?";
}

StdErrorMode se_mode_from(std::string_view s) {
    if (s == "classical") return StdErrorMode::Classical;
    if (s == "robust") return StdErrorMode::Robust;
    throw ConfigError("unknown standard error mode: " + std::string(s) +
                      " (want classical or robust)");
}

std::string_view to_string(StdErrorMode m) {
    return m == StdErrorMode::Classical ? "classical" : "robust";
}

void parse_filters(Filters& f, std::string_view text) {
    for (std::string_view group : split(text, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        const auto eq = group.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("filter group without '=': " +
                              std::string(group));
        const std::string_view key = trim(group.substr(0, eq));
        const std::string_view list = group.substr(eq + 1);
        for (std::string_view item : split(list, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            if (key == "years") {
                const int y = parse_number<int>(item, "filter year");
                if (y < 1970 || y > 2100)
                    throw ConfigError("filter year out of range: " +
                                      std::string(item));
                f.years.push_back(y);
            } else if (key == "maturity") {
                f.maturities.push_back(maturity_bucket_from(item));
            } else if (key == "tod") {
                f.tods.push_back(tod_slot_from(item));
            } else if (key == "band") {
                f.bands.push_back(moneyness_from(item));
            } else if (key == "type") {
                f.types.push_back(option_type_from(item));
            } else {
                throw ConfigError("unknown filter key: " + std::string(key));
            }
        }
    }
}

void apply_kv(RunConfig& cfg, std::string_view key, std::string_view value) {
    if (key == "trades") {
        cfg.trades_path = value;
    } else if (key == "spot") {
        cfg.spot_path = value;
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "interval") {
        cfg.interval_ms = interval_from(value);
    } else if (key == "sigma") {
        cfg.sigma_source = sigma_source_from(value);
    } else if (key == "rate") {
        cfg.rate = parse_number<double>(value, "rate");
    } else if (key == "scale") {
        if (value == "percent")
            cfg.iv_scale = 100.0;
        else if (value == "decimal")
            cfg.iv_scale = 1.0;
        else
            throw ConfigError("unknown scale: " + std::string(value) +
                              " (want percent or decimal)");
    } else if (key == "se") {
        cfg.se = se_mode_from(value);
    } else if (key == "level") {
        const double level = parse_number<double>(value, "level");
        if (level <= 0.0 || level >= 1.0)
            throw ConfigError("significance level must be inside (0, 1)");
        cfg.verdict_level = level;
    } else if (key == "curve_window") {
        if (value == "weekly")
            cfg.curve_window = CurveWindow::Weekly;
        else if (value == "yearly")
            cfg.curve_window = CurveWindow::Yearly;
        else
            throw ConfigError("unknown curve window: " + std::string(value) +
                              " (want weekly or yearly)");
    } else if (key == "filters") {
        parse_filters(cfg.filters, value);
    } else if (key == "format") {
        if (value == "csv")
            cfg.format = TradeFormat::Csv;
        else if (value == "jsonl")
            cfg.format = TradeFormat::Jsonl;
        else
            throw ConfigError("unknown format: " + std::string(value) +
                              " (want csv or jsonl)");
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(value, "seed");
    } else if (key == "seeds") {
        const int n = parse_number<int>(value, "seeds");
        if (n < 1) throw ConfigError("seeds must be at least 1");
        cfg.seeds = n;
    } else if (key == "regime") {
        cfg.regime = synth::regime_from(value);
    } else if (key == "horizon") {
        const int h = parse_number<int>(value, "horizon");
        if (h < 1) throw ConfigError("horizon must be at least 1 hour");
        cfg.horizon_hours = h;
    } else {
        throw ConfigError("unknown config key: " + std::string(key));
    }
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = line;
        const auto hash = sv.find('#');
        if (hash != std::string_view::npos) sv = sv.substr(0, hash);
        sv = trim(sv);
        if (sv.empty()) continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected key=value");
        try {
            apply_kv(cfg, trim(sv.substr(0, eq)), trim(sv.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": " + e.what());
        }
    }
}

std::string config_fingerprint(const RunConfig& cfg) {
    // Alphabetical by key; one line each; lists comma joined. Numeric values
    // in shortest round-trip form so equal configs hash equally.
    std::string out;
    auto line = [&out](std::string_view key, std::string value) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    };
    line("curve_window",
         cfg.curve_window == CurveWindow::Weekly ? "weekly" : "yearly");
    line("filters.band", join_mapped(cfg.filters.bands, [](Moneyness m) {
             return std::string(to_string(m));
         }));
    line("filters.maturity",
         join_mapped(cfg.filters.maturities, [](MaturityBucket b) {
             return std::string(to_string(b));
         }));
    line("filters.tod", join_mapped(cfg.filters.tods, [](TodSlot t) {
             return std::string(to_string(t));
         }));
    line("filters.type", join_mapped(cfg.filters.types, [](OptionType t) {
             return std::string(to_string(t));
         }));
    line("filters.years", join_mapped(cfg.filters.years, [](int y) {
             return std::to_string(y);
         }));
    line("format", cfg.format == TradeFormat::Csv ? "csv" : "jsonl");
    line("horizon", std::to_string(cfg.horizon_hours));
    line("interval_ms", std::to_string(cfg.interval_ms));
    line("iv_scale", format_double(cfg.iv_scale));
    line("level", format_double(cfg.verdict_level));
    line("out", cfg.out_dir);
    line("rate", format_double(cfg.rate));
    line("regime", std::string(synth::to_string(cfg.regime)));
    line("se", std::string(to_string(cfg.se)));
    line("seed", std::to_string(cfg.seed));
    line("seeds", std::to_string(cfg.seeds));
    line("sigma", std::string(to_string(cfg.sigma_source)));
    line("spot", cfg.spot_path);
    line("trades", cfg.trades_path);
    return out;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string fp = config_fingerprint(cfg);
    std::uint64_t h = 14695981039346656037ULL;
    for (const char c : fp) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[17];
    for (int i = 15; i >= 0; --i) {
        buf[i] = "0123456789abcdef"[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return buf;
}

}  // namespace nbp
