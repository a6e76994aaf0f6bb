#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nbp/errors.hpp"
#include "nbp/option_math.hpp"
#include "nbp/pipeline.hpp"
#include "nbp/synth.hpp"

namespace py = pybind11;

namespace {

nbp::OptionContext make_ctx(double spot, double strike, double tau,
                            double sigma, double rate,
                            const std::string& option_type) {
    nbp::OptionContext ctx;
    ctx.spot = spot;
    ctx.strike = strike;
    ctx.tau = tau;
    ctx.sigma = sigma;
    ctx.rate = rate;
    ctx.option_type = nbp::option_type_from(option_type);
    return ctx;
}

/// The heavy results cross the boundary as the same JSON the CLI writes; the
/// python package decodes them into plain dicts.
std::string analyze_files(const std::string& trades, const std::string& spot,
                          const std::map<std::string, std::string>& options) {
    nbp::RunConfig cfg;
    cfg.trades_path = trades;
    cfg.spot_path = spot;
    for (const auto& [key, value] : options) nbp::apply_kv(cfg, key, value);

    nbp::TradeParseResult tr = nbp::parse_trades_file(trades);
    nbp::SpotParseResult sp;
    if (!spot.empty()) sp = nbp::parse_spot_file(spot);

    nbp::AnalysisOutput out =
        nbp::analyze(cfg, std::move(tr.trades), std::move(sp.bars));
    nbp::CleaningReport merged = tr.report;
    merged.dropped_delta_bounds += out.cleaning.dropped_delta_bounds;
    merged.total_out = out.cleaning.total_out;
    out.cleaning = std::move(merged);
    out.spot_rows_dropped = sp.dropped;
    return nbp::report_json(cfg, out);
}

std::string simulate(const std::string& regime, int horizon_hours,
                     std::uint64_t seed, const std::string& out_dir,
                     const std::string& format) {
    nbp::synth::SynthConfig cfg;
    cfg.regime = nbp::synth::regime_from(regime);
    cfg.horizon_hours = horizon_hours;
    cfg.seed = seed;
    const nbp::synth::Dataset ds = nbp::synth::generate(cfg);
    if (!out_dir.empty()) {
        nbp::synth::write_dataset(ds, out_dir,
                                  format == "jsonl" ? nbp::TradeFormat::Jsonl
                                                    : nbp::TradeFormat::Csv);
    }
    return ds.truth_json;
}

std::string validate_regimes(int seeds, int horizon_hours,
                             std::uint64_t base_seed) {
    nbp::synth::SynthConfig base;
    base.horizon_hours = horizon_hours;
    base.seed = base_seed;
    const nbp::synth::Regime regimes[] = {
        nbp::synth::Regime::NullNoise, nbp::synth::Regime::LimitsToArbitrage,
        nbp::synth::Regime::VolatilityLearning,
        nbp::synth::Regime::DirectionalLearning, nbp::synth::Regime::Mixed};
    return nbp::synth::recovery_json(
        nbp::synth::validate_regimes(base, seeds, regimes));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Net buying pressure and implied volatility curve analytics";

    py::register_exception<nbp::Error>(m, "Error");

    m.def(
        "bs_delta",
        [](double spot, double strike, double tau, double sigma, double rate,
           const std::string& option_type) {
            return nbp::bs_delta(
                make_ctx(spot, strike, tau, sigma, rate, option_type));
        },
        py::arg("spot"), py::arg("strike"), py::arg("tau"), py::arg("sigma"),
        py::arg("rate") = 0.0, py::arg("option_type") = "C",
        "Black-Scholes delta on the forward; put delta is call delta - 1.");

    m.def(
        "bs_price",
        [](double spot, double strike, double tau, double sigma, double rate,
           const std::string& option_type) {
            return nbp::bs_price(
                make_ctx(spot, strike, tau, sigma, rate, option_type));
        },
        py::arg("spot"), py::arg("strike"), py::arg("tau"), py::arg("sigma"),
        py::arg("rate") = 0.0, py::arg("option_type") = "C",
        "Black-Scholes price in the same currency unit as spot.");

    m.def(
        "implied_vol",
        [](double price, double spot, double strike, double tau, double rate,
           const std::string& option_type) {
            return nbp::implied_vol(
                price, make_ctx(spot, strike, tau, 1.0, rate, option_type));
        },
        py::arg("price"), py::arg("spot"), py::arg("strike"), py::arg("tau"),
        py::arg("rate") = 0.0, py::arg("option_type") = "C",
        "Invert the Black-Scholes price in sigma over (0, 5].");

    m.def("norm_cdf", &nbp::norm_cdf, py::arg("x"),
          "Standard normal cumulative distribution function.");

    m.def(
        "realized_vol",
        [](const std::vector<double>& daily_log_returns,
           int annualization_days) {
            return nbp::realized_vol(daily_log_returns, annualization_days);
        },
        py::arg("daily_log_returns"), py::arg("annualization_days") = 365,
        "Annualized realized volatility from daily log returns.");

    m.def(
        "classify_moneyness",
        [](double delta) {
            return std::string(nbp::to_string(nbp::classify_moneyness(delta)));
        },
        py::arg("delta"),
        "Moneyness band name for a signed delta: dotm, otm, atm, itm, ditm "
        "or excluded.");

    m.def("analyze_files", &analyze_files, py::arg("trades"),
          py::arg("spot") = "",
          py::arg("options") = std::map<std::string, std::string>(),
          "Run the full regression battery; returns the report as JSON. "
          "Option keys match the config file keys (interval, sigma, scale, "
          "se, filters, level, rate, curve_window).");

    m.def("simulate", &simulate, py::arg("regime") = "null",
          py::arg("horizon_hours") = 2000, py::arg("seed") = 1,
          py::arg("out_dir") = "", py::arg("format") = "csv",
          "Generate a synthetic market; writes trades/spot/truth files when "
          "out_dir is given. Returns the planted truth as JSON.");

    m.def("validate_regimes", &validate_regimes, py::arg("seeds") = 20,
          py::arg("horizon_hours") = 2000, py::arg("base_seed") = 1,
          "Tally verdict flags over fresh datasets for every planted regime; "
          "returns the recovery table as JSON.");
}
