#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbp/config.hpp"
#include "nbp/ingest.hpp"
#include "nbp/ivcurve.hpp"
#include "nbp/pressure.hpp"
#include "nbp/regress.hpp"

namespace nbp {

/// A battery slice that was not fitted and why. Recorded in the report; the
/// run continues.
struct SpecNotice {
    std::string spec_label;
    /// "insufficient_rows", "rank_deficient", "degenerate" (flat dependent)
    /// or "skipped" (horizon not reachable from the base interval).
    std::string status;
    std::string detail;
};

struct AnalysisOutput {
    CleaningReport cleaning;
    std::size_t spot_rows_dropped = 0;
    std::vector<PressureFrame> frames;      // [0] = pooled All/All slice
    std::vector<RegressionResult> results;
    std::vector<SpecNotice> notices;
    HypothesisVerdict verdict;
    CurveSeries curve;
};

/// Runs the full battery over already-ingested data: classification,
/// bucketing, slice frames, predictive + pressure-response + volume
/// decomposition fits, smile series, verdict.
AnalysisOutput analyze(const RunConfig& cfg, std::vector<TradeTick> trades,
                       std::vector<SpotBar> bars);

/// One row per (interval, band, type) of the slice; group and slice level
/// columns are repeated on each row. Missing values are empty fields.
void write_series_csv(std::ostream& out, const PressureFrame& frame);

/// Wide TSV, one row per fitted regression. `kinds` selects which models.
void write_table_tsv(std::ostream& out,
                     const std::vector<RegressionResult>& results,
                     std::initializer_list<SpecKind> kinds,
                     const std::string& config_line);

/// Versioned JSON with config echo + hash, cleaning tallies, every fitted
/// slice, notices and the verdict.
std::string report_json(const RunConfig& cfg, const AnalysisOutput& out);

/// Rebuild the TSV tables and verdict summary from a saved report.json.
void render_report(const std::filesystem::path& report_path,
                   const std::filesystem::path& out_dir, std::ostream& log);

/// Subcommand bodies; they throw on fatal errors, main maps the exception
/// family to an exit code.
void cmd_ingest(const RunConfig& cfg, std::ostream& log);
void cmd_analyze(const RunConfig& cfg, std::ostream& log);
void cmd_simulate(const RunConfig& cfg, std::ostream& log);
void cmd_validate(const RunConfig& cfg, std::ostream& log);
void cmd_report(const RunConfig& cfg, const std::filesystem::path& report_path,
                std::ostream& log);

void print_verdict(std::ostream& out, const HypothesisVerdict& v);

}  // namespace nbp
