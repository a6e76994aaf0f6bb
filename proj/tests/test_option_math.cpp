#include "nbp/option_math.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nbp/errors.hpp"
#include "oracles.hpp"

using namespace nbp;

TEST_CASE("norm_cdf matches quadrature reference values") {
    // Values frozen from the adaptive-Simpson oracle in oracles.hpp.
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(1.959963984540054) ==
          doctest::Approx(0.975).epsilon(1e-13));
    CHECK(norm_cdf(-1.0) ==
          doctest::Approx(0.15865525393145705).epsilon(1e-13));
    CHECK(norm_cdf(3.5) == doctest::Approx(0.9997673709209645).epsilon(1e-13));
    CHECK(norm_cdf(-8.0) < 1e-15);
    CHECK(norm_cdf(-8.0) > 0.0);
}

TEST_CASE("norm_cdf tracks the oracle across the real line") {
    for (int i = -600; i <= 600; ++i) {
        const double x = i / 100.0;
        const double want = static_cast<double>(oracle::norm_cdf(x));
        CHECK(std::fabs(norm_cdf(x) - want) < 1e-13);
    }
}

TEST_CASE("norm_cdf symmetry and monotonicity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    double prev_x = -7.0, prev = norm_cdf(-7.0);
    std::vector<double> xs;
    for (int i = 0; i < 200; ++i) xs.push_back(u(rng));
    std::sort(xs.begin(), xs.end());
    for (double x : xs) {
        CHECK(norm_cdf(x) + norm_cdf(-x) == doctest::Approx(1.0).epsilon(1e-14));
        if (x > prev_x) CHECK(norm_cdf(x) >= prev);
        prev_x = x;
        prev = norm_cdf(x);
    }
}

TEST_CASE("norm_cdf_inv inverts norm_cdf") {
    for (double p : {1e-9, 1e-4, 0.02, 0.2, 0.5, 0.77, 0.975, 1.0 - 1e-6}) {
        CHECK(norm_cdf(norm_cdf_inv(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(norm_cdf_inv(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(norm_cdf_inv(0.0), DomainError);
    CHECK_THROWS_AS(norm_cdf_inv(1.0), DomainError);
}

TEST_CASE("bs_price matches the payoff-quadrature oracle") {
    // Frozen oracle outputs.
    OptionContext atm{100, 100, 1.0, 0.2, 0.0, OptionType::Call};
    CHECK(bs_price(atm) == doctest::Approx(7.9655674554058196).epsilon(1e-10));
    atm.option_type = OptionType::Put;
    CHECK(bs_price(atm) == doctest::Approx(7.9655674554058196).epsilon(1e-10));

    OptionContext otm_call{100, 110, 0.5, 0.25, 0.03, OptionType::Call};
    CHECK(bs_price(otm_call) ==
          doctest::Approx(3.8985511831850664).epsilon(1e-10));
    OptionContext otm_put = otm_call;
    otm_put.option_type = OptionType::Put;
    CHECK(bs_price(otm_put) ==
          doctest::Approx(12.260864539521956).epsilon(1e-10));

    OptionContext btc{40000, 45000, 19.0 / 365.0, 0.8, 0.0, OptionType::Call};
    CHECK(bs_price(btc) == doctest::Approx(1209.8120731114278).epsilon(1e-9));
    OptionContext btc_put{40000, 36000, 3.0 / 365.0, 0.9, 0.0, OptionType::Put};
    CHECK(bs_price(btc_put) ==
          doctest::Approx(143.51728541054795).epsilon(1e-9));

    OptionContext extreme{100, 20, 2.0, 5.0, 0.0, OptionType::Call};
    CHECK(bs_price(extreme) ==
          doctest::Approx(99.98221143638603).epsilon(1e-10));
}

TEST_CASE("bs_price tracks the oracle on random contexts") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        OptionContext ctx;
        ctx.spot = 100.0 * std::exp(2.0 * (u01(rng) - 0.5));
        ctx.strike = ctx.spot * std::exp(1.2 * (u01(rng) - 0.5));
        ctx.tau = 0.01 + 2.0 * u01(rng);
        ctx.sigma = 0.08 + 2.5 * u01(rng);
        ctx.rate = 0.08 * (u01(rng) - 0.25);
        ctx.option_type = u01(rng) < 0.5 ? OptionType::Call : OptionType::Put;
        const double want = static_cast<double>(
            oracle::option_price(ctx.spot, ctx.strike, ctx.tau, ctx.sigma,
                                 ctx.rate, ctx.option_type == OptionType::Call));
        CHECK(bs_price(ctx) ==
              doctest::Approx(want).epsilon(1e-9).scale(ctx.spot * 1e-4));
    }
}

TEST_CASE("put-call parity") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        OptionContext ctx;
        ctx.spot = 50.0 + 100.0 * u01(rng);
        ctx.strike = ctx.spot * (0.6 + 0.8 * u01(rng));
        ctx.tau = 0.01 + u01(rng);
        ctx.sigma = 0.1 + 1.5 * u01(rng);
        ctx.rate = 0.1 * (u01(rng) - 0.5);
        ctx.option_type = OptionType::Call;
        const double call = bs_price(ctx);
        ctx.option_type = OptionType::Put;
        const double put = bs_price(ctx);
        const double fwd_gap =
            ctx.spot - ctx.strike * std::exp(-ctx.rate * ctx.tau);
        CHECK(call - put ==
              doctest::Approx(fwd_gap).epsilon(1e-12).scale(ctx.spot));
    }
}

TEST_CASE("bs_delta agrees with a finite difference of bs_price") {
    // Frozen: one-week at-the-money contract at 80 vol.
    OptionContext wk{40000, 40000, 7.0 / 365.0, 0.8, 0.0, OptionType::Call};
    CHECK(bs_delta(wk) == doctest::Approx(0.5220877045991594).epsilon(1e-12));
    wk.option_type = OptionType::Put;
    CHECK(bs_delta(wk) ==
          doctest::Approx(0.5220877045991594 - 1.0).epsilon(1e-12));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        OptionContext ctx;
        ctx.spot = 80.0 + 60.0 * u01(rng);
        ctx.strike = ctx.spot * (0.7 + 0.6 * u01(rng));
        ctx.tau = 0.02 + 1.5 * u01(rng);
        ctx.sigma = 0.1 + 1.2 * u01(rng);
        ctx.rate = 0.06 * (u01(rng) - 0.5);
        ctx.option_type = u01(rng) < 0.5 ? OptionType::Call : OptionType::Put;
        const double h = ctx.spot * 1e-5;
        OptionContext up = ctx, dn = ctx;
        up.spot += h;
        dn.spot -= h;
        const double fd = (bs_price(up) - bs_price(dn)) / (2.0 * h);
        CHECK(bs_delta(ctx) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("delta sign conventions") {
    OptionContext ctx{100, 100, 0.5, 0.4, 0.0, OptionType::Call};
    const double call = bs_delta(ctx);
    ctx.option_type = OptionType::Put;
    const double put = bs_delta(ctx);
    CHECK(call > 0.0);
    CHECK(call < 1.0);
    CHECK(put == doctest::Approx(call - 1.0).epsilon(1e-15));
}

TEST_CASE("implied_vol inverts bs_price across the sigma range") {
    OptionContext base{100, 95, 30.0 / 365.0, 0.0, 0.01, OptionType::Call};
    for (double sigma = 0.05; sigma <= 5.0; sigma += 0.0495) {
        OptionContext ctx = base;
        ctx.sigma = sigma;
        const double price = bs_price(ctx);
        CHECK(implied_vol(price, base) ==
              doctest::Approx(sigma).epsilon(1e-9));
    }
    base.option_type = OptionType::Put;
    for (double sigma : {0.07, 0.4, 1.1, 2.9, 4.6}) {
        OptionContext ctx = base;
        ctx.sigma = sigma;
        CHECK(implied_vol(bs_price(ctx), base) ==
              doctest::Approx(sigma).epsilon(1e-9));
    }
}

TEST_CASE("implied_vol rejects prices outside the arbitrage band") {
    OptionContext ctx{100, 90, 0.25, 0.0, 0.0, OptionType::Call};
    CHECK_THROWS_AS(implied_vol(9.0, ctx), DomainError);    // below intrinsic
    CHECK_THROWS_AS(implied_vol(100.0, ctx), DomainError);  // above spot
    CHECK_THROWS_AS(implied_vol(-1.0, ctx), DomainError);
    // Inside the band but above the sigma cap.
    OptionContext tight{100, 100, 2.0 / 365.0, 0.0, 0.0, OptionType::Call};
    CHECK_THROWS_AS(implied_vol(60.0, tight), DomainError);
}

TEST_CASE("realized_vol from daily returns") {
    std::vector<double> flat(15, 0.05);
    CHECK(realized_vol(flat) ==
          doctest::Approx(0.955248658727140).epsilon(1e-14));
    CHECK(realized_vol(flat, 252) ==
          doctest::Approx(std::sqrt(252 * 0.0025)).epsilon(1e-14));
    std::vector<double> one{0.1};
    CHECK(realized_vol(one) == doctest::Approx(std::sqrt(365.0) * 0.1));
    CHECK_THROWS_AS(realized_vol(std::vector<double>{}), DomainError);
}

TEST_CASE("moneyness bands are left-open right-closed on |delta|") {
    CHECK(classify_moneyness(0.0) == Moneyness::Excluded);
    CHECK(classify_moneyness(0.02) == Moneyness::Excluded);
    CHECK(classify_moneyness(0.021) == Moneyness::DOTM);
    CHECK(classify_moneyness(0.125) == Moneyness::DOTM);
    CHECK(classify_moneyness(0.1251) == Moneyness::OTM);
    CHECK(classify_moneyness(0.375) == Moneyness::OTM);
    CHECK(classify_moneyness(0.5) == Moneyness::ATM);
    CHECK(classify_moneyness(0.625) == Moneyness::ATM);
    CHECK(classify_moneyness(0.626) == Moneyness::ITM);
    CHECK(classify_moneyness(0.875) == Moneyness::ITM);
    CHECK(classify_moneyness(0.876) == Moneyness::DITM);
    CHECK(classify_moneyness(0.98) == Moneyness::DITM);
    CHECK(classify_moneyness(0.981) == Moneyness::Excluded);
    // Put deltas are negative; the band uses the magnitude.
    CHECK(classify_moneyness(-0.5) == Moneyness::ATM);
    CHECK(classify_moneyness(-0.98) == Moneyness::DITM);
    CHECK(classify_moneyness(-0.01) == Moneyness::Excluded);
}

TEST_CASE("maturity buckets") {
    const Millis t0 = civil_to_ms(2021, 3, 1);
    CHECK(maturity_days(t0, t0 + kMillisPerDay) == 1);
    CHECK(maturity_days(t0, t0 + kMillisPerHour) == 1);  // intraday rounds up
    CHECK(maturity_days(t0, t0 + 7 * kMillisPerDay) == 7);
    CHECK(maturity_days(t0, t0 + 7 * kMillisPerDay + 1) == 8);
    CHECK(maturity_bucket(1) == MaturityBucket::Short);
    CHECK(maturity_bucket(7) == MaturityBucket::Short);
    CHECK(maturity_bucket(8) == MaturityBucket::Medium);
    CHECK(maturity_bucket(21) == MaturityBucket::Medium);
    CHECK(maturity_bucket(22) == MaturityBucket::Long);
    CHECK(maturity_bucket(180) == MaturityBucket::Long);
    CHECK_THROWS_AS(maturity_days(t0, t0), DomainError);
}

TEST_CASE("time-of-day slots split the UTC day in three") {
    const Millis day = civil_to_ms(2021, 6, 15);
    CHECK(tod_slot(day) == TodSlot::Asia);
    CHECK(tod_slot(day + 7 * kMillisPerHour + 59 * kMillisPerMinute) ==
          TodSlot::Asia);
    CHECK(tod_slot(day + 8 * kMillisPerHour) == TodSlot::Europe);
    CHECK(tod_slot(day + 15 * kMillisPerHour) == TodSlot::Europe);
    CHECK(tod_slot(day + 16 * kMillisPerHour) == TodSlot::US);
    CHECK(tod_slot(day + 23 * kMillisPerHour) == TodSlot::US);
}

TEST_CASE("realized vol tracker warms up and rolls") {
    // Hourly bars over 20 days; closes follow exp(0.01 * day) so every
    // daily log return is exactly 0.01.
    std::vector<SpotBar> bars;
    const Millis start = civil_to_ms(2021, 1, 1);
    for (int h = 0; h <= 20 * 24; ++h) {
        const Millis end = start + h * kMillisPerHour;
        const double day = static_cast<double>(h) / 24.0;
        bars.push_back({end, 30000.0 * std::exp(0.01 * day), 1e6});
    }
    RealizedVolTracker tracker(bars, 15);

    // Closes land on days 0..20, so the 15th return completes at day 15.
    CHECK_FALSE(tracker.at(start + 14 * kMillisPerDay).has_value());
    CHECK_FALSE(tracker.at(start + 15 * kMillisPerDay - 1).has_value());
    const auto warm = tracker.at(start + 15 * kMillisPerDay);
    REQUIRE(warm.has_value());
    CHECK(*warm == doctest::Approx(std::sqrt(365.0 * 1e-4)).epsilon(1e-12));
    // Stays flat later in this constant-return world.
    const auto later = tracker.at(start + 19 * kMillisPerDay + 5);
    REQUIRE(later.has_value());
    CHECK(*later == doctest::Approx(*warm).epsilon(1e-15));
}

TEST_CASE("realized vol tracker matches realized_vol on varied returns") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.04, 0.04);
    std::vector<double> returns;
    std::vector<SpotBar> bars;
    const Millis start = civil_to_ms(2020, 2, 1);
    double close = 9000.0;
    bars.push_back({start, close, 1e6});
    for (int d = 1; d <= 40; ++d) {
        const double r = u(rng);
        returns.push_back(r);
        close *= std::exp(r);
        bars.push_back({start + d * kMillisPerDay, close, 1e6});
    }
    RealizedVolTracker tracker(bars, 15);
    const auto got = tracker.at(start + 40 * kMillisPerDay);
    REQUIRE(got.has_value());
    const std::span<const double> last15(returns.data() + 25, 15);
    CHECK(*got == doctest::Approx(realized_vol(last15)).epsilon(1e-14));

    const auto mid = tracker.at(start + 20 * kMillisPerDay + 3600);
    REQUIRE(mid.has_value());
    const std::span<const double> w(returns.data() + 5, 15);
    CHECK(*mid == doctest::Approx(realized_vol(w)).epsilon(1e-14));
}

TEST_CASE("domain validation on contexts") {
    OptionContext bad{0.0, 100, 1.0, 0.2, 0.0, OptionType::Call};
    CHECK_THROWS_AS(bs_price(bad), DomainError);
    bad = {100, 100, -1.0, 0.2, 0.0, OptionType::Call};
    CHECK_THROWS_AS(bs_delta(bad), DomainError);
    bad = {100, 100, 1.0, 0.0, 0.0, OptionType::Call};
    CHECK_THROWS_AS(bs_price(bad), DomainError);
}
