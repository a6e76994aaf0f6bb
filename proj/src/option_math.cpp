#include "nbp/option_math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbp/errors.hpp"

namespace nbp {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSigmaCap = 5.0;

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(field) + " must be positive and finite");
}

struct D1D2 {
    double d1;
    double d2;
};

D1D2 d_terms(const OptionContext& ctx) {
    require_positive(ctx.spot, "spot");
    require_positive(ctx.strike, "strike");
    require_positive(ctx.tau, "tau");
    require_positive(ctx.sigma, "sigma");
    const double sv = ctx.sigma * std::sqrt(ctx.tau);
    const double fwd = ctx.spot * std::exp(ctx.rate * ctx.tau);
    const double d1 = (std::log(fwd / ctx.strike) + 0.5 * sv * sv) / sv;
    return {d1, d1 - sv};
}

}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf_inv(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("norm_cdf_inv requires p in (0,1)");
    // Acklam's rational approximation, then one Halley polish.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = norm_cdf(x) - p;
    const double u = e / norm_pdf(x);
    return x - u / (1.0 + 0.5 * x * u);
}

double bs_delta(const OptionContext& ctx) {
    const double call = norm_cdf(d_terms(ctx).d1);
    return ctx.option_type == OptionType::Call ? call : call - 1.0;
}

double bs_price(const OptionContext& ctx) {
    const auto [d1, d2] = d_terms(ctx);
    const double disc_k = ctx.strike * std::exp(-ctx.rate * ctx.tau);
    if (ctx.option_type == OptionType::Call)
        return ctx.spot * norm_cdf(d1) - disc_k * norm_cdf(d2);
    return disc_k * norm_cdf(-d2) - ctx.spot * norm_cdf(-d1);
}

double bs_vega(const OptionContext& ctx) {
    const auto [d1, d2] = d_terms(ctx);
    (void)d2;
    return ctx.spot * norm_pdf(d1) * std::sqrt(ctx.tau);
}

double implied_vol(double price, const OptionContext& ctx_in) {
    OptionContext ctx = ctx_in;
    require_positive(ctx.spot, "spot");
    require_positive(ctx.strike, "strike");
    require_positive(ctx.tau, "tau");
    if (!std::isfinite(price)) throw DomainError("price must be finite");

    const double disc_k = ctx.strike * std::exp(-ctx.rate * ctx.tau);
    const bool is_call = ctx.option_type == OptionType::Call;
    const double intrinsic =
        is_call ? std::max(ctx.spot - disc_k, 0.0) : std::max(disc_k - ctx.spot, 0.0);
    const double upper = is_call ? ctx.spot : disc_k;
    if (!(price > intrinsic) || !(price < upper))
        throw DomainError("price outside the no-arbitrage band");

    double lo = 1e-9;
    double hi = kSigmaCap;
    ctx.sigma = hi;
    if (price > bs_price(ctx))
        throw DomainError("price implies volatility above the 5.0 cap");

    // Newton with a maintained bisection bracket; the price is strictly
    // increasing in sigma so the bracket always contains the root.
    double sigma = std::clamp(
        std::sqrt(2.0 * 3.14159265358979323846 / ctx.tau) * price / ctx.spot,
        0.05, 2.0);
    for (int iter = 0; iter < 200; ++iter) {
        ctx.sigma = sigma;
        const double diff = bs_price(ctx) - price;
        if (diff > 0.0)
            hi = sigma;
        else
            lo = sigma;
        const double vega = bs_vega(ctx);
        double next = vega > 1e-300 ? sigma - diff / vega : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - sigma) < 1e-14 * std::max(1.0, sigma)) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    ctx.sigma = sigma;
    if (std::fabs(bs_price(ctx) - price) > 1e-9 * ctx.spot)
        throw NumericError("implied vol iteration did not converge");
    return sigma;
}

double realized_vol(std::span<const double> daily_log_returns,
                    int annualization_days) {
    if (daily_log_returns.empty())
        throw DomainError("realized_vol requires at least one return");
    if (annualization_days <= 0)
        throw DomainError("annualization_days must be positive");
    double sum_sq = 0.0;
    for (double r : daily_log_returns) sum_sq += r * r;
    return std::sqrt(annualization_days * sum_sq /
                     static_cast<double>(daily_log_returns.size()));
}

Moneyness classify_moneyness(double delta) {
    const double a = std::fabs(delta);
    if (!(a > 0.02)) return Moneyness::Excluded;
    if (a <= 0.125) return Moneyness::DOTM;
    if (a <= 0.375) return Moneyness::OTM;
    if (a <= 0.625) return Moneyness::ATM;
    if (a <= 0.875) return Moneyness::ITM;
    if (a <= 0.98) return Moneyness::DITM;
    return Moneyness::Excluded;
}

int maturity_days(Millis now_ms, Millis expiry_ms) {
    const Millis diff = expiry_ms - now_ms;
    if (diff <= 0) throw DomainError("expiry is not after the timestamp");
    return static_cast<int>((diff + kMillisPerDay - 1) / kMillisPerDay);
}

MaturityBucket maturity_bucket(int days_to_expiry) {
    if (days_to_expiry <= 7) return MaturityBucket::Short;
    if (days_to_expiry <= 21) return MaturityBucket::Medium;
    return MaturityBucket::Long;
}

TodSlot tod_slot(Millis ts_ms) {
    const int h = utc_hour(ts_ms);
    if (h < 8) return TodSlot::Asia;
    if (h < 16) return TodSlot::Europe;
    return TodSlot::US;
}

RealizedVolTracker::RealizedVolTracker(std::span<const SpotBar> bars,
                                       int window_days, int annualization_days)
    : window_days_(window_days) {
    if (window_days <= 0) throw DomainError("window_days must be positive");
    if (bars.empty()) return;

    // Daily closes sampled at UTC midnight: the value of the last bar
    // closing at or before each boundary.
    std::vector<Millis> day_end;
    std::vector<double> close;
    Millis boundary = floor_to_day(bars.front().interval_end_ms);
    if (boundary < bars.front().interval_end_ms) boundary += kMillisPerDay;
    std::size_t i = 0;
    double last_close = 0.0;
    bool have_close = false;
    while (boundary <= bars.back().interval_end_ms) {
        while (i < bars.size() && bars[i].interval_end_ms <= boundary) {
            if (bars[i].close > 0.0) {
                last_close = bars[i].close;
                have_close = true;
            }
            ++i;
        }
        if (have_close) {
            day_end.push_back(boundary);
            close.push_back(last_close);
        }
        boundary += kMillisPerDay;
    }

    if (close.size() < 2) return;
    std::vector<double> returns(close.size() - 1);
    for (std::size_t r = 0; r + 1 < close.size(); ++r)
        returns[r] = std::log(close[r + 1] / close[r]);

    const std::size_t w = static_cast<std::size_t>(window_days);
    for (std::size_t r = w - 1; r < returns.size(); ++r) {
        const std::span<const double> win(returns.data() + (r + 1 - w), w);
        effective_from_.push_back(day_end[r + 1]);
        vol_.push_back(realized_vol(win, annualization_days));
    }
}

std::optional<double> RealizedVolTracker::at(Millis t) const {
    const auto it =
        std::upper_bound(effective_from_.begin(), effective_from_.end(), t);
    if (it == effective_from_.begin()) return std::nullopt;
    return vol_[static_cast<std::size_t>(it - effective_from_.begin()) - 1];
}

}  // namespace nbp
