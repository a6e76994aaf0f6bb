#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "nbp/errors.hpp"
#include "nbp/pipeline.hpp"

namespace {

/// Values arrive as strings and flow through the same key=value channel as
/// config files, so precedence is simply defaults, then file, then flags.
struct Pending {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> kvs;
};

void add_kv_option(CLI::App* cmd, Pending& p, const std::string& flag,
                   std::string key, const std::string& desc) {
    cmd->add_option_function<std::string>(
        flag,
        [&p, key = std::move(key)](const std::string& v) {
            p.kvs.emplace_back(key, v);
        },
        desc);
}

void add_common(CLI::App* cmd, Pending& p) {
    cmd->add_option("--config", p.config_path,
                    "flat key=value file applied before the flags");
    add_kv_option(cmd, p, "--out", "out", "output directory (default: out)");
}

nbp::RunConfig resolve(const Pending& p) {
    nbp::RunConfig cfg;
    if (!p.config_path.empty()) nbp::load_config_file(cfg, p.config_path);
    for (const auto& [key, value] : p.kvs) nbp::apply_kv(cfg, key, value);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "nbpress: net buying pressure and implied volatility analytics"};
    app.require_subcommand(1);

    Pending ping, pana, psim, pval, prep;
    std::string report_path;

    CLI::App* ingest = app.add_subcommand(
        "ingest", "clean a trade file and write the canonical CSV");
    add_common(ingest, ping);
    add_kv_option(ingest, ping, "--trades", "trades", "trade file (csv or jsonl)");
    add_kv_option(ingest, ping, "--spot", "spot", "hourly spot bar csv");

    CLI::App* analyze = app.add_subcommand(
        "analyze", "run the regression battery and write the report");
    add_common(analyze, pana);
    add_kv_option(analyze, pana, "--trades", "trades", "trade file (csv or jsonl)");
    add_kv_option(analyze, pana, "--spot", "spot", "hourly spot bar csv");
    add_kv_option(analyze, pana, "--interval", "interval",
                  "aggregation interval: 1h, 4h, 8h or 24h");
    add_kv_option(analyze, pana, "--sigma", "sigma",
                  "delta volatility source: rv15, rv30 or trade_iv");
    add_kv_option(analyze, pana, "--scale", "scale",
                  "dependent variable units: percent or decimal");
    add_kv_option(analyze, pana, "--se", "se",
                  "standard errors: classical or robust");
    add_kv_option(analyze, pana, "--filters", "filters",
                  "e.g. \"years=2020,2021;maturity=short,medium;tod=us\"");
    add_kv_option(analyze, pana, "--level", "level",
                  "significance level for the verdict (default 0.05)");
    add_kv_option(analyze, pana, "--rate", "rate",
                  "continuously compounded interest rate (default 0)");
    add_kv_option(analyze, pana, "--curve-window", "curve_window",
                  "smile statistics window: weekly or yearly");

    CLI::App* simulate = app.add_subcommand(
        "simulate", "generate one synthetic market dataset");
    add_common(simulate, psim);
    add_kv_option(simulate, psim, "--regime", "regime",
                  "null, limits, volatility, directional or mixed");
    add_kv_option(simulate, psim, "--horizon", "horizon",
                  "trading hours to simulate (default 2000)");
    add_kv_option(simulate, psim, "--seed", "seed", "RNG seed (default 1)");
    add_kv_option(simulate, psim, "--format", "format",
                  "trade file format: csv or jsonl");

    CLI::App* validate = app.add_subcommand(
        "validate", "recover every planted regime over many seeds");
    add_common(validate, pval);
    add_kv_option(validate, pval, "--seeds", "seeds",
                  "datasets per regime (default 100)");
    add_kv_option(validate, pval, "--horizon", "horizon",
                  "trading hours per dataset (default 2000)");
    add_kv_option(validate, pval, "--seed", "seed", "base RNG seed");

    CLI::App* report = app.add_subcommand(
        "report", "re-render tables and verdict from a saved report.json");
    add_common(report, prep);
    report->add_option("report_json", report_path, "path to report.json")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (ingest->parsed()) nbp::cmd_ingest(resolve(ping), std::cout);
        if (analyze->parsed()) nbp::cmd_analyze(resolve(pana), std::cout);
        if (simulate->parsed()) nbp::cmd_simulate(resolve(psim), std::cout);
        if (validate->parsed()) nbp::cmd_validate(resolve(pval), std::cout);
        if (report->parsed())
            nbp::cmd_report(resolve(prep), report_path, std::cout);
        return 0;
    } catch (const nbp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nbp::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const nbp::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const nbp::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 4;
    } catch (const nbp::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 5;
    } catch (const nbp::RankError& e) {
        std::cerr << "rank error: " << e.what() << "\n";
        return 6;
    } catch (const nbp::InsufficientRowsError& e) {
        std::cerr << "insufficient rows: " << e.what() << "\n";
        return 7;
    } catch (const nbp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
