#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbp/pressure.hpp"

namespace nbp {

enum class StdErrorMode { Classical, Robust };

enum class Stars : std::uint8_t { None, P10, P5, P1 };
Stars stars_for(double p);
std::string_view star_suffix(Stars s);  // "", "*", "**", "***"

struct OlsOptions {
    StdErrorMode se = StdErrorMode::Classical;
    /// Minimum observations beyond the parameter count; fewer throws
    /// InsufficientRowsError.
    int min_extra_rows = 10;
};

struct FitResult {
    std::vector<std::string> names;  // "const" first
    std::vector<double> coef;
    std::vector<double> se;
    std::vector<double> t;
    std::vector<double> p;           // two-sided, Student t with n-k dof
    std::vector<Stars> stars;
    std::vector<double> cov;         // k x k, row major
    std::vector<double> residuals;   // n
    double r_squared = 0.0;
    std::int64_t nobs = 0;
    StdErrorMode se_mode = StdErrorMode::Classical;

    double cov_at(std::size_t i, std::size_t j) const {
        return cov[i * coef.size() + j];
    }
};

/// Least squares of y on [1, x_columns...] via column-pivoted QR. Throws
/// RankError naming the collinear columns when the design is rank deficient,
/// DomainError when y has no variance, InsufficientRowsError when too short.
/// Robust mode uses HC1 heteroskedasticity-consistent covariance.
FitResult ols_fit(std::span<const std::vector<double>> x_columns,
                  std::span<const double> y,
                  std::span<const std::string> names,
                  const OlsOptions& opts = {});

/// Two-sided p-value for H0: coef[a] == coef[b], t form with the fit's
/// residual degrees of freedom. Returns 1 when a == b.
double wald_equal(const FitResult& fit, std::size_t a, std::size_t b);

enum class SpecKind : std::uint8_t { Predictive, AtmPressure, WingPressure, VolDecomp };
std::string_view to_string(SpecKind k);

/// Identifies one regression slice in reports and tables.
struct SpecId {
    SpecKind kind = SpecKind::VolDecomp;
    OptionType j = OptionType::Call;        // dependent cell type
    Moneyness k = Moneyness::ATM;           // dependent cell band
    OptionType atm_driver = OptionType::Call;  // WingPressure cross term only
    std::string horizon;                    // "1h", "4h", "1d", "5d"
    std::vector<int> years;                 // empty = pooled
    MaturityBucket maturity = MaturityBucket::All;
    TodSlot tod = TodSlot::All;
    std::string dependent;

    std::string label() const;
};

struct RegressionResult {
    SpecId spec;
    FitResult fit;
};

/// Column layout shared by the three pressure response models: intercept,
/// spot return, spot volume, two pressure terms, lagged dependent.
inline constexpr std::size_t kIdxConst = 0;
inline constexpr std::size_t kIdxReturn = 1;
inline constexpr std::size_t kIdxVolume = 2;
inline constexpr std::size_t kIdxPressureA = 3;  // call ATM / own band / V
inline constexpr std::size_t kIdxPressureB = 4;  // put ATM / cross ATM / D
inline constexpr std::size_t kIdxLagDep = 5;

/// ATM IV change on spot return, spot volume, call and put ATM pressure,
/// and its own lag.
RegressionResult run_atm_pressure(const PressureFrame& frame, OptionType j,
                                std::span<const int> years,
                                const OlsOptions& opts);

/// Wing IV change (k in OTM/DOTM) on its own band pressure plus the ATM
/// pressure of `atm_driver`, with the usual controls.
RegressionResult run_wing_pressure(const PressureFrame& frame, Moneyness k,
                              OptionType j, OptionType atm_driver,
                              std::span<const int> years,
                              const OlsOptions& opts);

/// IV change on the band's volatility demand V and directional demand D
/// (signed for the dependent type), with the usual controls.
RegressionResult run_decomposition(const PressureFrame& frame, Moneyness k,
                          OptionType j, std::span<const int> years,
                          const OlsOptions& opts);

enum class PredictiveX { SpotReturn, IvChange, RvChange };
enum class PredictiveY { VolumeChange, Imbalance };
std::string_view to_string(PredictiveX x);
std::string_view to_string(PredictiveY y);

/// x_t on x_{t-1} and y_{t-1}; the frame's interval width is the horizon.
RegressionResult run_predictive(const PressureFrame& frame, PredictiveX x,
                                PredictiveY y, std::string horizon_label,
                                const OlsOptions& opts);

struct CoefEvidence {
    std::string spec_label;
    std::string coef_name;
    double coef = 0.0;
    double t = 0.0;
    double p = 1.0;
};

struct VerdictConfig {
    double level = 0.05;       // significance level for support decisions
    double wald_level = 0.10;  // ATM-route equality test threshold
};

/// Hypothesis calls aggregated over a set of fitted slices.
struct HypothesisVerdict {
    double level = 0.05;

    /// Lagged IV-change coefficient significantly negative in at least one
    /// ATM slice and significantly positive in none: quotes revert, so
    /// non-fundamental pressure moved them.
    bool limits_to_arbitrage = false;

    /// Overall call: decomposition route when V/D slices are present, ATM
    /// route otherwise.
    bool volatility_learning = false;
    bool directional_learning = false;

    /// Grouped-volume coefficient positive and significant across bands.
    bool vol_route_decomp = false;
    /// Call and put ATM pressure slopes both positive, at least one
    /// significant, and a Wald test cannot tell them apart.
    bool vol_route_atm = false;

    std::optional<double> wald_equal_p;     // ATM call vs put pressure
    std::optional<double> strength_ratio;   // beta_V / beta_D when both sig.

    std::vector<CoefEvidence> limits_evidence;
    std::vector<CoefEvidence> volatility_evidence;
    std::vector<CoefEvidence> directional_evidence;
};

HypothesisVerdict evaluate_verdict(std::span<const RegressionResult> results,
                                   const VerdictConfig& cfg = {});

}  // namespace nbp
