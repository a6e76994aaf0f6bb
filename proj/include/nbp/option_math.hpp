#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nbp/types.hpp"

namespace nbp {

/// Standard normal CDF, accurate to ~1e-16 via erfc.
double norm_cdf(double x);

/// Standard normal density.
double norm_pdf(double x);

/// Inverse standard normal CDF for p in (0,1). Rational initial guess
/// polished with Halley steps; good to ~1e-15.
double norm_cdf_inv(double p);

/// Inputs for Black-Scholes valuation on the forward F = spot * exp(rate*tau).
struct OptionContext {
    double spot = 0.0;     // underlying level, USD
    double strike = 0.0;   // USD
    double tau = 0.0;      // time to expiry in years (ACT/365)
    double sigma = 0.0;    // annualized volatility, decimal
    double rate = 0.0;     // continuously compounded, annualized
    OptionType option_type = OptionType::Call;
};

/// Black-Scholes delta. Call delta = Phi(d1) with
/// d1 = [ln(F/K) + sigma^2 tau / 2] / (sigma sqrt(tau)); put delta is
/// call delta - 1. Throws DomainError on non-positive spot/strike/tau/sigma.
double bs_delta(const OptionContext& ctx);

/// Black-Scholes price in the same currency unit as spot.
double bs_price(const OptionContext& ctx);

/// dPrice/dSigma, used by the implied-vol solver.
double bs_vega(const OptionContext& ctx);

/// Inverts bs_price in sigma over (0, 5]. ctx.sigma is ignored. Throws
/// DomainError when price is outside the no-arbitrage band for the contract
/// and NumericError if the solver fails to converge.
double implied_vol(double price, const OptionContext& ctx);

/// Annualized realized volatility from daily log returns:
/// sqrt(annualization_days * mean(r_i^2)). Throws DomainError when empty.
double realized_vol(std::span<const double> daily_log_returns,
                    int annualization_days = 365);

/// Moneyness band from signed delta (|delta| is banded).
Moneyness classify_moneyness(double delta);

/// Calendar days to expiry: ceil over the exact ms difference. Non-positive
/// differences never occur for cleaned trades (expiry strictly after trade).
int maturity_days(Millis now_ms, Millis expiry_ms);

/// Short <= 7 days, Medium 8..21, Long >= 22.
MaturityBucket maturity_bucket(int days_to_expiry);

/// Session slot from the UTC hour of the timestamp.
TodSlot tod_slot(Millis ts_ms);

/// Rolling realized volatility over daily closes sampled at UTC midnight.
/// Built once from spot bars; `at(t)` returns the vol computed from the most
/// recent `window_days` completed daily returns with day end <= t, or nullopt
/// while the window is still warming up.
class RealizedVolTracker {
  public:
    RealizedVolTracker(std::span<const SpotBar> bars, int window_days = 15,
                       int annualization_days = 365);

    std::optional<double> at(Millis t) const;
    int window_days() const { return window_days_; }

  private:
    std::vector<Millis> effective_from_;  // day-end timestamps, ascending
    std::vector<double> vol_;             // value in force from that instant
    int window_days_;
};

}  // namespace nbp
