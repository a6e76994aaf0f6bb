#include "nbp/regress.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "nbp/errors.hpp"

namespace nbp {

namespace {

// Pressure and volume regressors enter in millions of USD so coefficients
// stay in a readable range next to IV changes in percentage points.
constexpr double kUsdScale = 1e-6;

double two_sided_p(double t_stat, double dof) {
    if (!std::isfinite(t_stat)) return 0.0;
    boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t_stat)));
}

std::string horizon_of(Millis width_ms) {
    char buf[32];
    if (width_ms % kMillisPerDay == 0) {
        std::snprintf(buf, sizeof buf, "%lldd",
                      static_cast<long long>(width_ms / kMillisPerDay));
    } else if (width_ms % kMillisPerHour == 0) {
        std::snprintf(buf, sizeof buf, "%lldh",
                      static_cast<long long>(width_ms / kMillisPerHour));
    } else {
        std::snprintf(buf, sizeof buf, "%lldms", static_cast<long long>(width_ms));
    }
    return buf;
}

bool year_selected(Millis start_ms, std::span<const int> years) {
    if (years.empty()) return true;
    const int yr = utc_year(start_ms);
    return std::find(years.begin(), years.end(), yr) != years.end();
}

/// Shared assembly for the three pressure response models. The dependent is
/// an IV change series (gap rule leaves NaN holes); regressors are the spot
/// controls, two pressure series, and the lagged dependent. Rows with any
/// missing value are dropped listwise.
RegressionResult fit_pressure_model(const PressureFrame& frame,
                                    SpecId spec,
                                    const std::vector<double>& dep,
                                    const std::vector<double>& press_a,
                                    const std::vector<double>& press_b,
                                    std::vector<std::string> names,
                                    std::span<const int> years,
                                    const OlsOptions& opts) {
    const auto count = frame.grid.count;
    std::vector<double> y;
    std::vector<std::vector<double>> cols(5);
    for (std::int64_t t = 1; t < count; ++t) {
        if (!year_selected(frame.grid.start_ms(t), years)) continue;
        const double row[6] = {dep[t],
                               frame.spot_return[t],
                               frame.spot_volume[t] * kUsdScale,
                               press_a[t] * kUsdScale,
                               press_b[t] * kUsdScale,
                               dep[t - 1]};
        bool ok = true;
        for (double v : row) ok = ok && std::isfinite(v);
        if (!ok) continue;
        y.push_back(row[0]);
        for (std::size_t c = 0; c < 5; ++c) cols[c].push_back(row[c + 1]);
    }
    spec.horizon = horizon_of(frame.grid.width_ms);
    spec.years.assign(years.begin(), years.end());
    spec.maturity = frame.maturity;
    spec.tod = frame.tod;
    FitResult fit = ols_fit(cols, y, names, opts);
    return {std::move(spec), std::move(fit)};
}

std::string dep_name(Moneyness k, OptionType j) {
    std::string out = "d_iv_";
    out += to_string(k);
    out += '_';
    out += j == OptionType::Call ? "call" : "put";
    return out;
}

const CellSeries& cell_of(const PressureFrame& frame, Moneyness k,
                          OptionType j) {
    return frame.cell[band_index(k)][static_cast<int>(j)];
}

}  // namespace

Stars stars_for(double p) {
    if (p < 0.01) return Stars::P1;
    if (p < 0.05) return Stars::P5;
    if (p < 0.10) return Stars::P10;
    return Stars::None;
}

std::string_view star_suffix(Stars s) {
    switch (s) {
        case Stars::None: return "";
        case Stars::P10: return "*";
        case Stars::P5: return "**";
        case Stars::P1: return "***";
    }
    return "";
}

std::string_view to_string(SpecKind k) {
    switch (k) {
        case SpecKind::Predictive: return "predictive";
        case SpecKind::AtmPressure: return "atm_pressure";
        case SpecKind::WingPressure: return "wing_pressure";
        case SpecKind::VolDecomp: return "vol_decomp";
    }
    return "?";
}

std::string_view to_string(PredictiveX x) {
    switch (x) {
        case PredictiveX::SpotReturn: return "spot_return";
        case PredictiveX::IvChange: return "iv_change";
        case PredictiveX::RvChange: return "rv_change";
    }
    return "?";
}

std::string_view to_string(PredictiveY y) {
    return y == PredictiveY::VolumeChange ? "volume_change" : "imbalance";
}

std::string SpecId::label() const {
    std::string out{to_string(kind)};
    if (kind == SpecKind::Predictive) {
        out += '/';
        out += dependent;
    } else {
        out += '/';
        out += to_string(k);
        out += '_';
        out += j == OptionType::Call ? "call" : "put";
        if (kind == SpecKind::WingPressure) {
            out += "/atm_";
            out += atm_driver == OptionType::Call ? "call" : "put";
        }
    }
    if (!horizon.empty()) {
        out += '/';
        out += horizon;
    }
    if (!years.empty()) {
        out += '/';
        for (std::size_t i = 0; i < years.size(); ++i) {
            if (i > 0) out += '+';
            out += std::to_string(years[i]);
        }
    }
    if (maturity != MaturityBucket::All) {
        out += '/';
        out += to_string(maturity);
    }
    if (tod != TodSlot::All) {
        out += '/';
        out += to_string(tod);
    }
    return out;
}

FitResult ols_fit(std::span<const std::vector<double>> x_columns,
                  std::span<const double> y,
                  std::span<const std::string> names,
                  const OlsOptions& opts) {
    const std::size_t n = y.size();
    const std::size_t k = x_columns.size() + 1;

    std::vector<std::string> all_names;
    if (names.size() == k) {
        all_names.assign(names.begin(), names.end());
    } else if (names.size() == k - 1) {
        all_names.reserve(k);
        all_names.emplace_back("const");
        all_names.insert(all_names.end(), names.begin(), names.end());
    } else {
        throw DomainError("regression names list does not match column count");
    }

    for (const auto& col : x_columns) {
        if (col.size() != n)
            throw DomainError("regression column length mismatch");
    }
    if (n < k + static_cast<std::size_t>(opts.min_extra_rows)) {
        throw InsufficientRowsError(
            "regression needs at least " +
            std::to_string(k + static_cast<std::size_t>(opts.min_extra_rows)) +
            " usable rows, got " + std::to_string(n));
    }

    Eigen::MatrixXd x(n, k);
    x.col(0).setOnes();
    for (std::size_t j = 0; j + 1 < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = x_columns[j][i];
            if (!std::isfinite(v))
                throw DomainError("non-finite value in regressor " +
                                  all_names[j + 1]);
            x(i, j + 1) = v;
        }
    }
    Eigen::VectorXd yv(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(y[i]))
            throw DomainError("non-finite value in dependent variable");
        yv(i) = y[i];
    }
    const double y_mean = yv.mean();
    const double sst = (yv.array() - y_mean).square().sum();
    if (sst == 0.0)
        throw DomainError("dependent variable has no variance");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    const auto rank = qr.rank();
    if (rank < static_cast<Eigen::Index>(k)) {
        // The pivot permutation front-loads the independent columns; the
        // trailing entries are the ones that add no new direction.
        const auto& perm = qr.colsPermutation().indices();
        std::vector<std::string> bad;
        for (Eigen::Index i = rank; i < static_cast<Eigen::Index>(k); ++i)
            bad.push_back(all_names[static_cast<std::size_t>(perm[i])]);
        std::string msg = "design matrix is rank deficient (rank " +
                          std::to_string(rank) + " of " + std::to_string(k) +
                          "); collinear:";
        for (const auto& name : bad) msg += " " + name;
        throw RankError(msg, std::move(bad));
    }

    FitResult out;
    out.names = std::move(all_names);
    out.nobs = static_cast<std::int64_t>(n);
    out.se_mode = opts.se;

    Eigen::VectorXd beta = qr.solve(yv);
    Eigen::VectorXd resid = yv - x * beta;
    const double ssr = resid.squaredNorm();
    const double dof = static_cast<double>(n - k);

    const Eigen::MatrixXd xtx = x.transpose() * x;
    const Eigen::MatrixXd xtx_inv =
        xtx.ldlt().solve(Eigen::MatrixXd::Identity(k, k));

    Eigen::MatrixXd cov;
    if (opts.se == StdErrorMode::Classical) {
        cov = (ssr / dof) * xtx_inv;
    } else {
        // HC1: sandwich with squared residuals in the middle and the small
        // sample factor n / (n - k).
        const Eigen::MatrixXd meat =
            x.transpose() * resid.array().square().matrix().asDiagonal() * x;
        cov = (static_cast<double>(n) / dof) * xtx_inv * meat * xtx_inv;
    }

    out.coef.resize(k);
    out.se.resize(k);
    out.t.resize(k);
    out.p.resize(k);
    out.stars.resize(k);
    out.cov.resize(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        out.coef[i] = beta(i);
        out.se[i] = std::sqrt(std::max(cov(i, i), 0.0));
        out.t[i] = out.se[i] > 0.0
                       ? out.coef[i] / out.se[i]
                       : std::numeric_limits<double>::infinity();
        out.p[i] = two_sided_p(out.t[i], dof);
        out.stars[i] = stars_for(out.p[i]);
        for (std::size_t j = 0; j < k; ++j) out.cov[i * k + j] = cov(i, j);
    }
    out.residuals.assign(resid.data(), resid.data() + n);
    out.r_squared = 1.0 - ssr / sst;
    return out;
}

double wald_equal(const FitResult& fit, std::size_t a, std::size_t b) {
    if (a == b) return 1.0;
    const double diff = fit.coef[a] - fit.coef[b];
    const double var =
        fit.cov_at(a, a) + fit.cov_at(b, b) - 2.0 * fit.cov_at(a, b);
    const double dof =
        static_cast<double>(fit.nobs - static_cast<std::int64_t>(fit.coef.size()));
    if (var <= 0.0) return diff == 0.0 ? 1.0 : 0.0;
    return two_sided_p(diff / std::sqrt(var), dof);
}

RegressionResult run_atm_pressure(const PressureFrame& frame, OptionType j,
                                std::span<const int> years,
                                const OlsOptions& opts) {
    SpecId spec;
    spec.kind = SpecKind::AtmPressure;
    spec.j = j;
    spec.k = Moneyness::ATM;
    spec.dependent = dep_name(Moneyness::ATM, j);
    return fit_pressure_model(
        frame, std::move(spec), cell_of(frame, Moneyness::ATM, j).delta_iv,
        cell_of(frame, Moneyness::ATM, OptionType::Call).pressure,
        cell_of(frame, Moneyness::ATM, OptionType::Put).pressure,
        {"const", "spot_return", "spot_volume", "call_atm_pressure",
         "put_atm_pressure", "lag_iv_change"},
        years, opts);
}

RegressionResult run_wing_pressure(const PressureFrame& frame, Moneyness k,
                              OptionType j, OptionType atm_driver,
                              std::span<const int> years,
                              const OlsOptions& opts) {
    SpecId spec;
    spec.kind = SpecKind::WingPressure;
    spec.j = j;
    spec.k = k;
    spec.atm_driver = atm_driver;
    spec.dependent = dep_name(k, j);
    std::string cross = atm_driver == OptionType::Call ? "call_atm_pressure"
                                                       : "put_atm_pressure";
    return fit_pressure_model(
        frame, std::move(spec), cell_of(frame, k, j).delta_iv,
        cell_of(frame, k, j).pressure,
        cell_of(frame, Moneyness::ATM, atm_driver).pressure,
        {"const", "spot_return", "spot_volume", "own_pressure", cross,
         "lag_iv_change"},
        years, opts);
}

RegressionResult run_decomposition(const PressureFrame& frame, Moneyness k,
                          OptionType j, std::span<const int> years,
                          const OlsOptions& opts) {
    SpecId spec;
    spec.kind = SpecKind::VolDecomp;
    spec.j = j;
    spec.k = k;
    spec.dependent = dep_name(k, j);
    const GroupSeries& group = frame.group[band_index(k)];
    std::vector<double> dir = group.d_call;
    if (j == OptionType::Put)
        for (double& v : dir) v = -v;
    return fit_pressure_model(
        frame, std::move(spec), cell_of(frame, k, j).delta_iv, group.v, dir,
        {"const", "spot_return", "spot_volume", "vol_demand", "dir_demand",
         "lag_iv_change"},
        years, opts);
}

RegressionResult run_predictive(const PressureFrame& frame, PredictiveX x,
                                PredictiveY y, std::string horizon_label,
                                const OlsOptions& opts) {
    const std::vector<double>* xs = nullptr;
    switch (x) {
        case PredictiveX::SpotReturn: xs = &frame.spot_return; break;
        case PredictiveX::IvChange: xs = &frame.delta_iv_all; break;
        case PredictiveX::RvChange: xs = &frame.delta_realized_vol; break;
    }
    const std::vector<double>* ys = y == PredictiveY::VolumeChange
                                        ? &frame.delta_option_volume
                                        : &frame.imbalance;
    const double y_scale = kUsdScale;  // both drivers are USD quantities

    std::vector<double> dep;
    std::vector<std::vector<double>> cols(2);
    for (std::int64_t t = 1; t < frame.grid.count; ++t) {
        const double row[3] = {(*xs)[t], (*xs)[t - 1], (*ys)[t - 1] * y_scale};
        bool ok = true;
        for (double v : row) ok = ok && std::isfinite(v);
        if (!ok) continue;
        dep.push_back(row[0]);
        cols[0].push_back(row[1]);
        cols[1].push_back(row[2]);
    }

    SpecId spec;
    spec.kind = SpecKind::Predictive;
    spec.dependent = std::string(to_string(x)) + "~" + std::string(to_string(y));
    spec.horizon = std::move(horizon_label);
    spec.maturity = frame.maturity;
    spec.tod = frame.tod;
    std::vector<std::string> names = {
        "const", std::string(to_string(x)) + "_lag",
        std::string(to_string(y)) + "_lag"};
    FitResult fit = ols_fit(cols, dep, names, opts);
    return {std::move(spec), std::move(fit)};
}

namespace {

CoefEvidence evidence_of(const RegressionResult& r, std::size_t idx) {
    return {r.spec.label(), r.fit.names[idx], r.fit.coef[idx], r.fit.t[idx],
            r.fit.p[idx]};
}

bool sig_pos(const FitResult& f, std::size_t i, double level) {
    return f.p[i] < level && f.coef[i] > 0.0;
}

bool sig_neg(const FitResult& f, std::size_t i, double level) {
    return f.p[i] < level && f.coef[i] < 0.0;
}

}  // namespace

HypothesisVerdict evaluate_verdict(std::span<const RegressionResult> results,
                                   const VerdictConfig& cfg) {
    HypothesisVerdict v;
    v.level = cfg.level;

    // Mean reversion of ATM quotes: in the ATM pressure-response slices the
    // lagged-change coefficient must be significantly negative somewhere and
    // significantly positive nowhere.
    int lag_neg = 0;
    int lag_pos = 0;
    for (const auto& r : results) {
        if (r.spec.kind != SpecKind::AtmPressure) continue;
        v.limits_evidence.push_back(evidence_of(r, kIdxLagDep));
        if (sig_neg(r.fit, kIdxLagDep, cfg.level)) ++lag_neg;
        if (sig_pos(r.fit, kIdxLagDep, cfg.level)) ++lag_pos;
    }
    v.limits_to_arbitrage = lag_neg >= 1 && lag_pos == 0;

    // Learning routes over the demand decomposition slices: the grouped
    // volatility (directional) demand slope should be positive across the
    // board, not just in a lucky band.
    int decomp_n = 0;
    int vol_pos = 0, vol_neg = 0;
    int dir_pos = 0, dir_neg = 0;
    std::vector<double> ratios;
    for (const auto& r : results) {
        if (r.spec.kind != SpecKind::VolDecomp) continue;
        ++decomp_n;
        v.volatility_evidence.push_back(evidence_of(r, kIdxPressureA));
        v.directional_evidence.push_back(evidence_of(r, kIdxPressureB));
        if (sig_pos(r.fit, kIdxPressureA, cfg.level)) ++vol_pos;
        if (sig_neg(r.fit, kIdxPressureA, cfg.level)) ++vol_neg;
        if (sig_pos(r.fit, kIdxPressureB, cfg.level)) ++dir_pos;
        if (sig_neg(r.fit, kIdxPressureB, cfg.level)) ++dir_neg;
        if (r.fit.p[kIdxPressureA] < cfg.level &&
            r.fit.p[kIdxPressureB] < cfg.level &&
            r.fit.coef[kIdxPressureB] != 0.0) {
            ratios.push_back(r.fit.coef[kIdxPressureA] /
                             r.fit.coef[kIdxPressureB]);
        }
    }
    v.vol_route_decomp =
        vol_pos >= 1 && vol_pos > vol_neg && 2 * vol_pos >= decomp_n;
    v.directional_learning =
        dir_pos >= 1 && dir_pos > dir_neg && 2 * dir_pos >= decomp_n;
    if (!ratios.empty()) {
        double sum = 0.0;
        for (double r : ratios) sum += r;
        v.strength_ratio = sum / static_cast<double>(ratios.size());
    }

    // ATM route: symmetric positive response to call and put pressure that a
    // pairwise equality test cannot separate.
    for (const auto& r : results) {
        if (r.spec.kind != SpecKind::AtmPressure) continue;
        const FitResult& f = r.fit;
        const double wp = wald_equal(f, kIdxPressureA, kIdxPressureB);
        if (!v.wald_equal_p || r.spec.j == OptionType::Call)
            v.wald_equal_p = wp;
        const bool both_pos =
            f.coef[kIdxPressureA] > 0.0 && f.coef[kIdxPressureB] > 0.0;
        const bool one_sig = f.p[kIdxPressureA] < cfg.level ||
                             f.p[kIdxPressureB] < cfg.level;
        if (both_pos && one_sig && wp > cfg.wald_level) v.vol_route_atm = true;
    }

    v.volatility_learning = decomp_n > 0 ? v.vol_route_decomp : v.vol_route_atm;
    return v;
}

}  // namespace nbp
