#include "nbp/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "nbp/errors.hpp"
#include "nbp/synth.hpp"

namespace nbp {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

/// CSV/TSV field: empty for missing values instead of "nan".
std::string field(double v) { return std::isfinite(v) ? num(v) : std::string(); }

/// Display form, four significant digits.
std::string sig4(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[32];
    const auto [p, ec] =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
    return std::string(buf, p);
}

std::string horizon_text(Millis width_ms) {
    if (width_ms % kMillisPerDay == 0)
        return std::to_string(width_ms / kMillisPerDay) + "d";
    if (width_ms % kMillisPerHour == 0)
        return std::to_string(width_ms / kMillisPerHour) + "h";
    return std::to_string(width_ms) + "ms";
}

SpecKind spec_kind_from(std::string_view s) {
    if (s == "predictive") return SpecKind::Predictive;
    if (s == "atm_pressure") return SpecKind::AtmPressure;
    if (s == "wing_pressure") return SpecKind::WingPressure;
    if (s == "vol_decomp") return SpecKind::VolDecomp;
    throw ParseError("unknown regression kind: " + std::string(s));
}

constexpr Moneyness kBandOrder[kMoneynessBands] = {
    Moneyness::DOTM, Moneyness::OTM, Moneyness::ATM, Moneyness::ITM,
    Moneyness::DITM};

std::string joined_years(const std::vector<int>& years) {
    std::string out;
    for (std::size_t i = 0; i < years.size(); ++i) {
        if (i > 0) out += '+';
        out += std::to_string(years[i]);
    }
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void log_cleaning(std::ostream& log, const CleaningReport& r) {
    log << "trades: " << r.total_in << " in, " << r.total_out << " kept, "
        << r.dropped_total() << " dropped (missing_type "
        << r.dropped_missing_type << ", iv_bounds " << r.dropped_iv_bounds
        << ", delta_bounds " << r.dropped_delta_bounds << ", malformed "
        << r.dropped_malformed << ")\n";
}

/// Catches the per-slice fit errors, turning them into report notices; any
/// other exception is a real fault and propagates.
template <typename Fn>
void try_fit(AnalysisOutput& out, const std::string& label, Fn&& fn) {
    try {
        out.results.push_back(fn());
    } catch (const InsufficientRowsError& e) {
        out.notices.push_back({label, "insufficient_rows", e.what()});
    } catch (const RankError& e) {
        out.notices.push_back({label, "rank_deficient", e.what()});
    } catch (const DomainError& e) {
        out.notices.push_back({label, "degenerate", e.what()});
    }
}

std::string notice_label(SpecKind kind, OptionType j, Moneyness k,
                         OptionType atm_driver, std::string horizon,
                         std::vector<int> years, const PressureFrame& f) {
    SpecId id;
    id.kind = kind;
    id.j = j;
    id.k = k;
    id.atm_driver = atm_driver;
    id.horizon = std::move(horizon);
    id.years = std::move(years);
    id.maturity = f.maturity;
    id.tod = f.tod;
    return id.label();
}

/// ATM response for both types, wing responses, volume decomposition. Band
/// and type filters narrow the wing and decomposition cells; the ATM
/// response always runs because the verdict anchors on it.
void pressure_battery(AnalysisOutput& out, const PressureFrame& frame,
                      const Filters& filters, std::span<const int> years,
                      const OlsOptions& opts) {
    const std::string h = horizon_text(frame.grid.width_ms);
    const std::vector<int> yv(years.begin(), years.end());
    const auto band_on = [&](Moneyness k) {
        return filters.bands.empty() ||
               std::find(filters.bands.begin(), filters.bands.end(), k) !=
                   filters.bands.end();
    };
    const auto type_on = [&](OptionType j) {
        return filters.types.empty() ||
               std::find(filters.types.begin(), filters.types.end(), j) !=
                   filters.types.end();
    };

    for (const OptionType j : {OptionType::Call, OptionType::Put}) {
        try_fit(out,
                notice_label(SpecKind::AtmPressure, j, Moneyness::ATM, j, h, yv,
                             frame),
                [&] { return run_atm_pressure(frame, j, years, opts); });
    }
    for (const Moneyness k : {Moneyness::OTM, Moneyness::DOTM}) {
        if (!band_on(k)) continue;
        for (const OptionType j : {OptionType::Call, OptionType::Put}) {
            if (!type_on(j)) continue;
            try_fit(out, notice_label(SpecKind::WingPressure, j, k, j, h, yv, frame),
                    [&] { return run_wing_pressure(frame, k, j, j, years, opts); });
        }
    }
    for (const Moneyness k :
         {Moneyness::ATM, Moneyness::OTM, Moneyness::DOTM}) {
        if (!band_on(k)) continue;
        for (const OptionType j : {OptionType::Call, OptionType::Put}) {
            if (!type_on(j)) continue;
            try_fit(out, notice_label(SpecKind::VolDecomp, j, k, j, h, yv, frame),
                    [&] { return run_decomposition(frame, k, j, years, opts); });
        }
    }
}

json fit_json(const RegressionResult& r) {
    json coefs = json::array();
    for (std::size_t i = 0; i < r.fit.names.size(); ++i) {
        coefs.push_back({{"name", r.fit.names[i]},
                         {"coef", r.fit.coef[i]},
                         {"se", r.fit.se[i]},
                         {"t", r.fit.t[i]},
                         {"p", r.fit.p[i]},
                         {"stars", star_suffix(r.fit.stars[i])}});
    }
    return {{"label", r.spec.label()},
            {"kind", std::string(to_string(r.spec.kind))},
            {"dependent", r.spec.dependent},
            {"type", std::string(to_string(r.spec.j))},
            {"band", std::string(to_string(r.spec.k))},
            {"atm_driver", std::string(to_string(r.spec.atm_driver))},
            {"horizon", r.spec.horizon},
            {"years", r.spec.years},
            {"maturity", std::string(to_string(r.spec.maturity))},
            {"tod", std::string(to_string(r.spec.tod))},
            {"nobs", r.fit.nobs},
            {"r_squared", r.fit.r_squared},
            {"se_mode", std::string(to_string(r.fit.se_mode))},
            {"coefficients", std::move(coefs)}};
}

RegressionResult fit_from_json(const json& j) {
    RegressionResult r;
    r.spec.kind = spec_kind_from(j.at("kind").get<std::string>());
    r.spec.dependent = j.value("dependent", std::string());
    r.spec.j = option_type_from(j.at("type").get<std::string>());
    r.spec.k = moneyness_from(j.at("band").get<std::string>());
    r.spec.atm_driver = option_type_from(j.at("atm_driver").get<std::string>());
    r.spec.horizon = j.at("horizon").get<std::string>();
    r.spec.years = j.at("years").get<std::vector<int>>();
    r.spec.maturity =
        maturity_bucket_from(j.at("maturity").get<std::string>());
    r.spec.tod = tod_slot_from(j.at("tod").get<std::string>());
    r.fit.nobs = j.at("nobs").get<std::int64_t>();
    r.fit.r_squared = j.at("r_squared").get<double>();
    r.fit.se_mode = se_mode_from(j.at("se_mode").get<std::string>());
    for (const json& c : j.at("coefficients")) {
        r.fit.names.push_back(c.at("name").get<std::string>());
        r.fit.coef.push_back(c.at("coef").get<double>());
        r.fit.se.push_back(c.at("se").get<double>());
        r.fit.t.push_back(c.at("t").is_null()
                              ? std::numeric_limits<double>::quiet_NaN()
                              : c.at("t").get<double>());
        r.fit.p.push_back(c.at("p").get<double>());
        r.fit.stars.push_back(stars_for(r.fit.p.back()));
    }
    return r;
}

json evidence_json(const std::vector<CoefEvidence>& ev) {
    json out = json::array();
    for (const CoefEvidence& e : ev) {
        out.push_back({{"spec", e.spec_label},
                       {"coef_name", e.coef_name},
                       {"coef", e.coef},
                       {"t", e.t},
                       {"p", e.p}});
    }
    return out;
}

std::vector<CoefEvidence> evidence_from_json(const json& j) {
    std::vector<CoefEvidence> out;
    for (const json& e : j) {
        out.push_back({e.at("spec").get<std::string>(),
                       e.at("coef_name").get<std::string>(),
                       e.at("coef").get<double>(), e.at("t").get<double>(),
                       e.at("p").get<double>()});
    }
    return out;
}

std::string config_line_of(const json& config) {
    return "config " + config.at("hash").get<std::string>() + " interval=" +
           config.at("interval").get<std::string>() + " sigma=" +
           config.at("sigma").get<std::string>() + " se=" +
           config.at("se").get<std::string>();
}

}  // namespace

AnalysisOutput analyze(const RunConfig& cfg, std::vector<TradeTick> trades,
                       std::vector<SpotBar> bars) {
    AnalysisOutput out;

    std::optional<RealizedVolTracker> tracker;
    if (!bars.empty()) {
        const int window = cfg.sigma_source == SigmaSource::Rv30 ? 30 : 15;
        tracker.emplace(bars, window);
    }
    const RealizedVolTracker* rv = tracker ? &*tracker : nullptr;
    if (rv == nullptr && cfg.sigma_source != SigmaSource::TradeIv)
        throw ConfigError(std::string("sigma source ") +
                          std::string(to_string(cfg.sigma_source)) +
                          " needs spot bars; pass spot=<path> or use "
                          "sigma=trade_iv");

    const ClassifyConfig ccfg{cfg.sigma_source, cfg.rate};
    out.cleaning.total_in = trades.size();
    const std::vector<ClassifiedTrade> classified =
        classify_trades(trades, rv, ccfg, &out.cleaning);
    out.cleaning.total_out = classified.size();
    const AggregateMap aggs =
        bucket_trades(trades, classified, cfg.interval_ms);
    if (aggs.empty())
        throw DomainError("no trades survived classification; nothing to fit");

    const FrameInputs inputs{bars, rv, cfg.iv_scale};
    out.frames.push_back(build_frame(aggs, cfg.interval_ms,
                                     MaturityBucket::All, TodSlot::All,
                                     inputs));
    for (const MaturityBucket m : cfg.filters.maturities)
        out.frames.push_back(
            build_frame(aggs, cfg.interval_ms, m, TodSlot::All, inputs));
    for (const TodSlot t : cfg.filters.tods)
        out.frames.push_back(
            build_frame(aggs, cfg.interval_ms, MaturityBucket::All, t, inputs));

    const OlsOptions opts{cfg.se};
    const PressureFrame& pooled = out.frames.front();

    // Pooled battery first; the verdict is evaluated over exactly these
    // slices further down.
    pressure_battery(out, pooled, cfg.filters, {}, opts);
    const std::size_t pooled_end = out.results.size();

    for (const int year : cfg.filters.years) {
        const int years[] = {year};
        pressure_battery(out, pooled, cfg.filters, years, opts);
    }
    for (std::size_t i = 1; i < out.frames.size(); ++i)
        pressure_battery(out, out.frames[i], cfg.filters, {}, opts);

    // Lead-lag runs at fixed horizons regardless of the base interval, by
    // re-keying the aggregates when the horizon is coarser.
    const Millis horizons[] = {kMillisPerHour, kMillisPerDay,
                               5 * kMillisPerDay};
    for (const Millis h : horizons) {
        const std::string label = horizon_text(h);
        if (h % cfg.interval_ms != 0) {
            out.notices.push_back(
                {"predictive/" + label, "skipped",
                 "horizon is not a multiple of the base interval " +
                     horizon_text(cfg.interval_ms)});
            continue;
        }
        PressureFrame coarse;
        const PressureFrame* pf = &pooled;
        if (h != cfg.interval_ms) {
            coarse = build_frame(rebucket(aggs, cfg.interval_ms, h), h,
                                 MaturityBucket::All, TodSlot::All, inputs);
            pf = &coarse;
        }
        for (const PredictiveX x : {PredictiveX::SpotReturn,
                                    PredictiveX::IvChange,
                                    PredictiveX::RvChange}) {
            for (const PredictiveY y :
                 {PredictiveY::VolumeChange, PredictiveY::Imbalance}) {
                const std::string spec_label =
                    "predictive/" + std::string(to_string(x)) + "~" +
                    std::string(to_string(y)) + "/" + label;
                try_fit(out, spec_label,
                        [&] { return run_predictive(*pf, x, y, label, opts); });
            }
        }
    }

    std::vector<RegressionResult> canon;
    for (std::size_t i = 0; i < pooled_end; ++i) {
        const SpecKind kind = out.results[i].spec.kind;
        if (kind == SpecKind::AtmPressure || kind == SpecKind::VolDecomp)
            canon.push_back(out.results[i]);
    }
    out.verdict = evaluate_verdict(canon, {cfg.verdict_level, 0.10});

    out.curve = curve_series(trades, classified, cfg.curve_window, bars);
    return out;
}

void write_series_csv(std::ostream& out, const PressureFrame& frame) {
    out << "interval_start_ms,interval_end_ms,maturity,tod,band,type,"
           "pressure_dw_usd,mean_iv,delta_iv,volume_dw_usd,trades,"
           "band_d_call,band_v,band_total_dw,band_rel_d,band_rel_v,"
           "imbalance,slice_mean_iv,slice_delta_iv,slice_trades,"
           "option_volume_usd,delta_option_volume,"
           "spot_return,spot_volume_usd,realized_vol,delta_realized_vol\n";
    const std::string_view maturity = to_string(frame.maturity);
    const std::string_view tod = to_string(frame.tod);
    for (std::int64_t i = 0; i < frame.grid.count; ++i) {
        for (int b = 0; b < kMoneynessBands; ++b) {
            const GroupSeries& g = frame.group[b];
            for (int t = 0; t < 2; ++t) {
                const CellSeries& c = frame.cell[b][t];
                out << frame.grid.start_ms(i) << ',' << frame.grid.end_ms(i)
                    << ',' << maturity << ',' << tod << ','
                    << to_string(kBandOrder[b]) << ','
                    << to_string(static_cast<OptionType>(t)) << ','
                    << field(c.pressure[i]) << ',' << field(c.mean_iv[i])
                    << ',' << field(c.delta_iv[i]) << ','
                    << field(c.volume_dw[i]) << ',' << c.trades[i] << ','
                    << field(g.d_call[i]) << ',' << field(g.v[i]) << ','
                    << field(g.total_dw[i]) << ',' << field(g.rel_d[i]) << ','
                    << field(g.rel_v[i]) << ',' << field(frame.imbalance[i])
                    << ',' << field(frame.mean_iv_all[i]) << ','
                    << field(frame.delta_iv_all[i]) << ','
                    << frame.trades_all[i] << ','
                    << field(frame.option_volume[i]) << ','
                    << field(frame.delta_option_volume[i]) << ','
                    << field(frame.spot_return[i]) << ','
                    << field(frame.spot_volume[i]) << ','
                    << field(frame.realized_vol[i]) << ','
                    << field(frame.delta_realized_vol[i]) << '\n';
            }
        }
    }
}

void write_table_tsv(std::ostream& out,
                     const std::vector<RegressionResult>& results,
                     std::initializer_list<SpecKind> kinds,
                     const std::string& config_line) {
    const auto selected = [&](const RegressionResult& r) {
        return std::find(kinds.begin(), kinds.end(), r.spec.kind) !=
               kinds.end();
    };
    std::size_t width = 0;
    for (const RegressionResult& r : results)
        if (selected(r)) width = std::max(width, r.fit.names.size());

    out << "# " << config_line << '\n';
    out << "label\tkind\tdependent\thorizon\tyears\tmaturity\ttod\tnobs\t"
           "r_squared\tse_mode";
    for (std::size_t i = 1; i <= width; ++i)
        out << "\tname" << i << "\tcoef" << i << "\tse" << i << "\tt" << i
            << "\tp" << i << "\tsig" << i;
    out << '\n';

    for (const RegressionResult& r : results) {
        if (!selected(r)) continue;
        out << r.spec.label() << '\t' << to_string(r.spec.kind) << '\t'
            << r.spec.dependent << '\t' << r.spec.horizon << '\t'
            << joined_years(r.spec.years) << '\t'
            << to_string(r.spec.maturity) << '\t' << to_string(r.spec.tod)
            << '\t' << r.fit.nobs << '\t' << num(r.fit.r_squared) << '\t'
            << to_string(r.fit.se_mode);
        for (std::size_t i = 0; i < width; ++i) {
            if (i < r.fit.names.size()) {
                out << '\t' << r.fit.names[i] << '\t' << num(r.fit.coef[i])
                    << '\t' << field(r.fit.se[i]) << '\t' << field(r.fit.t[i])
                    << '\t' << field(r.fit.p[i]) << '\t'
                    << star_suffix(r.fit.stars[i]);
            } else {
                out << "\t\t\t\t\t\t";
            }
        }
        out << '\n';
    }
}

std::string report_json(const RunConfig& cfg, const AnalysisOutput& out) {
    json config = {
        {"hash", config_hash(cfg)},
        {"trades", cfg.trades_path},
        {"spot", cfg.spot_path},
        {"out", cfg.out_dir},
        {"interval", std::string(interval_label(cfg.interval_ms))},
        {"sigma", std::string(to_string(cfg.sigma_source))},
        {"rate", cfg.rate},
        {"iv_scale", cfg.iv_scale},
        {"se", std::string(to_string(cfg.se))},
        {"level", cfg.verdict_level},
        {"curve_window",
         cfg.curve_window == CurveWindow::Weekly ? "weekly" : "yearly"},
    };
    json filters;
    filters["years"] = cfg.filters.years;
    json lists = json::array();
    for (const MaturityBucket m : cfg.filters.maturities)
        lists.push_back(std::string(to_string(m)));
    filters["maturity"] = std::move(lists);
    lists = json::array();
    for (const TodSlot t : cfg.filters.tods)
        lists.push_back(std::string(to_string(t)));
    filters["tod"] = std::move(lists);
    lists = json::array();
    for (const Moneyness b : cfg.filters.bands)
        lists.push_back(std::string(to_string(b)));
    filters["band"] = std::move(lists);
    lists = json::array();
    for (const OptionType t : cfg.filters.types)
        lists.push_back(std::string(to_string(t)));
    filters["type"] = std::move(lists);
    config["filters"] = std::move(filters);

    json cleaning = {{"total_in", out.cleaning.total_in},
                     {"total_out", out.cleaning.total_out},
                     {"dropped_missing_type", out.cleaning.dropped_missing_type},
                     {"dropped_iv_bounds", out.cleaning.dropped_iv_bounds},
                     {"dropped_delta_bounds", out.cleaning.dropped_delta_bounds},
                     {"dropped_malformed", out.cleaning.dropped_malformed},
                     {"spot_rows_dropped", out.spot_rows_dropped}};

    json results = json::array();
    for (const RegressionResult& r : out.results) results.push_back(fit_json(r));

    json notices = json::array();
    for (const SpecNotice& n : out.notices)
        notices.push_back({{"spec", n.spec_label},
                           {"status", n.status},
                           {"detail", n.detail}});

    const HypothesisVerdict& v = out.verdict;
    json verdict = {
        {"level", v.level},
        {"limits_to_arbitrage", v.limits_to_arbitrage},
        {"volatility_learning", v.volatility_learning},
        {"directional_learning", v.directional_learning},
        {"vol_route_decomp", v.vol_route_decomp},
        {"vol_route_atm", v.vol_route_atm},
        {"wald_equal_p",
         v.wald_equal_p ? json(*v.wald_equal_p) : json(nullptr)},
        {"strength_ratio",
         v.strength_ratio ? json(*v.strength_ratio) : json(nullptr)},
        {"limits_evidence", evidence_json(v.limits_evidence)},
        {"volatility_evidence", evidence_json(v.volatility_evidence)},
        {"directional_evidence", evidence_json(v.directional_evidence)},
    };

    json curve_rows = json::array();
    for (const CurveRow& row : out.curve.rows) {
        curve_rows.push_back({{"window_end_ms", row.window_end},
                              {"trades", row.trades},
                              {"mean_iv", row.mean_iv},
                              {"level", row.stats.level},
                              {"left_slope", row.stats.left_slope},
                              {"right_slope", row.stats.right_slope},
                              {"vol_spread", row.stats.vol_spread},
                              {"relative_iv", row.stats.relative_iv}});
    }

    json j = {{"version", 1},
              {"config", std::move(config)},
              {"cleaning", std::move(cleaning)},
              {"results", std::move(results)},
              {"notices", std::move(notices)},
              {"verdict", std::move(verdict)},
              {"curve",
               {{"rows", std::move(curve_rows)}, {"notes", out.curve.notes}}}};
    return j.dump(2) + "\n";
}

void render_report(const std::filesystem::path& report_path,
                   const std::filesystem::path& out_dir, std::ostream& log) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) throw IoError("cannot read report " + report_path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("report " + report_path.string() + ": " + e.what());
    }
    if (!j.contains("version") || j.at("version").get<int>() != 1)
        throw ParseError("report " + report_path.string() +
                         ": unsupported version");

    std::vector<RegressionResult> results;
    for (const json& rj : j.at("results")) results.push_back(fit_from_json(rj));

    const std::string line = config_line_of(j.at("config"));
    fs::create_directories(out_dir);
    {
        auto out = open_out(out_dir / "tables_pressure.tsv");
        write_table_tsv(out, results,
                        {SpecKind::AtmPressure, SpecKind::WingPressure, SpecKind::VolDecomp},
                        line);
    }
    {
        auto out = open_out(out_dir / "tables_predictive.tsv");
        write_table_tsv(out, results, {SpecKind::Predictive}, line);
    }

    const json& vj = j.at("verdict");
    HypothesisVerdict v;
    v.level = vj.at("level").get<double>();
    v.limits_to_arbitrage = vj.at("limits_to_arbitrage").get<bool>();
    v.volatility_learning = vj.at("volatility_learning").get<bool>();
    v.directional_learning = vj.at("directional_learning").get<bool>();
    v.vol_route_decomp = vj.at("vol_route_decomp").get<bool>();
    v.vol_route_atm = vj.at("vol_route_atm").get<bool>();
    if (!vj.at("wald_equal_p").is_null())
        v.wald_equal_p = vj.at("wald_equal_p").get<double>();
    if (!vj.at("strength_ratio").is_null())
        v.strength_ratio = vj.at("strength_ratio").get<double>();
    v.limits_evidence = evidence_from_json(vj.at("limits_evidence"));
    v.volatility_evidence = evidence_from_json(vj.at("volatility_evidence"));
    v.directional_evidence =
        evidence_from_json(vj.at("directional_evidence"));

    {
        auto out = open_out(out_dir / "verdict.txt");
        print_verdict(out, v);
    }
    print_verdict(log, v);
    log << "rendered " << results.size() << " fitted slices into "
        << out_dir.string() << "\n";
}

void cmd_ingest(const RunConfig& cfg, std::ostream& log) {
    if (cfg.trades_path.empty())
        throw ConfigError("ingest needs a trades file (trades=<path>)");
    const TradeParseResult tr = parse_trades_file(cfg.trades_path);
    fs::create_directories(cfg.out_dir);
    {
        auto out = open_out(fs::path(cfg.out_dir) / "trades_clean.csv");
        write_trades_csv(out, tr.trades);
    }
    log_cleaning(log, tr.report);

    json issues = json::array();
    for (const RowIssue& issue : tr.report.issues)
        issues.push_back({{"line", issue.line}, {"reason", issue.reason}});
    json report = {{"total_in", tr.report.total_in},
                   {"total_out", tr.report.total_out},
                   {"dropped_missing_type", tr.report.dropped_missing_type},
                   {"dropped_iv_bounds", tr.report.dropped_iv_bounds},
                   {"dropped_delta_bounds", tr.report.dropped_delta_bounds},
                   {"dropped_malformed", tr.report.dropped_malformed},
                   {"issues", std::move(issues)}};

    if (!cfg.spot_path.empty()) {
        const SpotParseResult sp = parse_spot_file(cfg.spot_path);
        auto out = open_out(fs::path(cfg.out_dir) / "spot_clean.csv");
        write_spot_csv(out, sp.bars);
        log << "spot: " << sp.bars.size() << " bars kept, " << sp.dropped
            << " dropped\n";
        report["spot_total_in"] = sp.total_in;
        report["spot_dropped"] = sp.dropped;
    }
    {
        auto out = open_out(fs::path(cfg.out_dir) / "cleaning.json");
        out << report.dump(2) << "\n";
    }
    log << "wrote " << (fs::path(cfg.out_dir) / "trades_clean.csv").string()
        << "\n";
}

void cmd_analyze(const RunConfig& cfg, std::ostream& log) {
    if (cfg.trades_path.empty())
        throw ConfigError("analyze needs a trades file (trades=<path>)");
    TradeParseResult tr = parse_trades_file(cfg.trades_path);
    SpotParseResult sp;
    if (!cfg.spot_path.empty()) sp = parse_spot_file(cfg.spot_path);

    AnalysisOutput out =
        analyze(cfg, std::move(tr.trades), std::move(sp.bars));

    // analyze() sees post-parse rows only; fold the parse-stage drops back in
    // so the report covers the raw file.
    CleaningReport merged = tr.report;
    merged.dropped_delta_bounds += out.cleaning.dropped_delta_bounds;
    merged.total_out = out.cleaning.total_out;
    out.cleaning = std::move(merged);
    out.spot_rows_dropped = sp.dropped;

    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    for (std::size_t i = 0; i < out.frames.size(); ++i) {
        const PressureFrame& f = out.frames[i];
        std::string name = "series";
        if (f.maturity != MaturityBucket::All)
            name += std::string("_") + std::string(to_string(f.maturity));
        else if (f.tod != TodSlot::All)
            name += std::string("_") + std::string(to_string(f.tod));
        auto os = open_out(dir / (name + ".csv"));
        write_series_csv(os, f);
    }
    {
        auto os = open_out(dir / "curve.csv");
        write_curve_csv(os, out.curve);
    }
    const std::string line = "config " + config_hash(cfg) + " interval=" +
                             std::string(interval_label(cfg.interval_ms)) +
                             " sigma=" +
                             std::string(to_string(cfg.sigma_source)) +
                             " se=" + std::string(to_string(cfg.se));
    {
        auto os = open_out(dir / "tables_pressure.tsv");
        write_table_tsv(os, out.results,
                        {SpecKind::AtmPressure, SpecKind::WingPressure, SpecKind::VolDecomp},
                        line);
    }
    {
        auto os = open_out(dir / "tables_predictive.tsv");
        write_table_tsv(os, out.results, {SpecKind::Predictive}, line);
    }
    {
        auto os = open_out(dir / "report.json");
        os << report_json(cfg, out);
    }

    log_cleaning(log, out.cleaning);
    if (out.spot_rows_dropped > 0)
        log << "spot: " << out.spot_rows_dropped << " rows dropped\n";
    log << out.results.size() << " regressions fitted, " << out.notices.size()
        << " slices skipped\n";
    for (const SpecNotice& n : out.notices)
        log << "  notice " << n.spec_label << ": " << n.status
            << (n.detail.empty() ? "" : " (" + n.detail + ")") << "\n";
    print_verdict(log, out.verdict);
    log << "wrote " << (dir / "report.json").string() << "\n";
}

void cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    synth::SynthConfig scfg;
    scfg.regime = cfg.regime;
    scfg.horizon_hours = cfg.horizon_hours;
    scfg.seed = cfg.seed;
    const synth::Dataset ds = synth::generate(scfg);
    synth::write_dataset(ds, cfg.out_dir, cfg.format);
    log << "regime " << synth::to_string(scfg.regime) << " seed " << scfg.seed
        << ": " << ds.trades.size() << " trades, " << ds.spot.size()
        << " spot bars -> " << cfg.out_dir << "\n";
}

void cmd_validate(const RunConfig& cfg, std::ostream& log) {
    synth::SynthConfig base;
    base.seed = cfg.seed;
    base.horizon_hours = cfg.horizon_hours;
    const synth::Regime regimes[] = {
        synth::Regime::NullNoise, synth::Regime::LimitsToArbitrage,
        synth::Regime::VolatilityLearning, synth::Regime::DirectionalLearning,
        synth::Regime::Mixed};
    const synth::RecoveryReport report =
        synth::validate_regimes(base, cfg.seeds, regimes, &log);
    fs::create_directories(cfg.out_dir);
    {
        auto os = open_out(fs::path(cfg.out_dir) / "recovery.json");
        os << synth::recovery_json(report);
    }
    log << "wrote " << (fs::path(cfg.out_dir) / "recovery.json").string()
        << "\n";
}

void cmd_report(const RunConfig& cfg, const std::filesystem::path& report_path,
                std::ostream& log) {
    render_report(report_path, cfg.out_dir, log);
}

void print_verdict(std::ostream& out, const HypothesisVerdict& v) {
    const auto yn = [](bool b) { return b ? "supported" : "not supported"; };
    out << "verdict (significance level " << sig4(v.level) << ")\n";
    out << "  limits to arbitrage:  " << yn(v.limits_to_arbitrage) << "\n";
    out << "  volatility learning:  " << yn(v.volatility_learning)
        << (v.vol_route_decomp
                ? " [volume decomposition route]"
                : (v.vol_route_atm ? " [atm symmetry route]" : ""))
        << "\n";
    out << "  directional learning: " << yn(v.directional_learning) << "\n";
    if (v.wald_equal_p)
        out << "  atm call vs put slope equality p: " << sig4(*v.wald_equal_p)
            << "\n";
    if (v.strength_ratio)
        out << "  volatility vs directional strength: "
            << sig4(*v.strength_ratio) << "\n";
    const auto dump = [&](const char* title,
                          const std::vector<CoefEvidence>& ev) {
        if (ev.empty()) return;
        out << "  " << title << ":\n";
        for (const CoefEvidence& e : ev)
            out << "    " << e.coef_name << " = " << sig4(e.coef)
                << " (t=" << sig4(e.t) << ", p=" << sig4(e.p) << ") in "
                << e.spec_label << "\n";
    };
    dump("reversion evidence", v.limits_evidence);
    dump("volatility evidence", v.volatility_evidence);
    dump("directional evidence", v.directional_evidence);
}

}  // namespace nbp
