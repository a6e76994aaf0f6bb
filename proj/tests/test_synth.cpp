#include "nbp/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "nbp/errors.hpp"
#include "nbp/option_math.hpp"
#include "nbp/pressure.hpp"

using namespace nbp;
using namespace nbp::synth;

namespace {

SynthConfig small_config(Regime regime, std::uint64_t seed = 1,
                         int hours = 240) {
    SynthConfig cfg;
    cfg.regime = regime;
    cfg.horizon_hours = hours;
    cfg.seed = seed;
    return cfg;
}

bool same_trades(const std::vector<TradeTick>& a,
                 const std::vector<TradeTick>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const TradeTick& x = a[i];
        const TradeTick& y = b[i];
        if (x.timestamp_ms != y.timestamp_ms || x.expiry_ms != y.expiry_ms ||
            x.strike != y.strike || x.option_type != y.option_type ||
            x.direction != y.direction || x.amount != y.amount ||
            x.option_price != y.option_price ||
            x.implied_vol != y.implied_vol || x.index_price != y.index_price)
            return false;
    }
    return true;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config validation names the offending field") {
    SynthConfig cfg = small_config(Regime::NullNoise);

    cfg.horizon_hours = 0;
    CHECK_THROWS_WITH_AS(validate_config(cfg),
                         "synthetic config: bad horizon_hours", ConfigError);

    cfg = small_config(Regime::NullNoise);
    cfg.spot_warmup_days = 10;  // realized-vol window cannot warm up
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = small_config(Regime::NullNoise);
    cfg.quote.iv_cap = 6.0;  // ingest would drop such quotes
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = small_config(Regime::NullNoise);
    cfg.flow.lead_hours = 200;
    cfg.flow.block_min_hours = 100;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = small_config(Regime::NullNoise);
    cfg.start_ms += 1;  // off the hour grid
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    CHECK_NOTHROW(validate_config(small_config(Regime::Mixed)));
}

TEST_CASE("generation is deterministic per config and seed") {
    const SynthConfig cfg = small_config(Regime::Mixed, 7, 240);
    const Dataset a = generate(cfg);
    const Dataset b = generate(cfg);
    CHECK(same_trades(a.trades, b.trades));
    REQUIRE(a.spot.size() == b.spot.size());
    for (std::size_t i = 0; i < a.spot.size(); ++i) {
        CHECK(a.spot[i].interval_end_ms == b.spot[i].interval_end_ms);
        CHECK(a.spot[i].close == b.spot[i].close);
        CHECK(a.spot[i].volume_usd == b.spot[i].volume_usd);
    }
    CHECK(a.truth_json == b.truth_json);

    // A different seed must actually change the draw.
    SynthConfig other = cfg;
    other.seed = 8;
    const Dataset c = generate(other);
    CHECK_FALSE(same_trades(a.trades, c.trades));
}

TEST_CASE("generated rows survive ingest cleaning untouched") {
    const Dataset ds = generate(small_config(Regime::LimitsToArbitrage, 3));
    REQUIRE(!ds.trades.empty());

    Millis prev = 0;
    for (const TradeTick& t : ds.trades) {
        CHECK(t.timestamp_ms >= prev);
        prev = t.timestamp_ms;
        CHECK(t.expiry_ms > t.timestamp_ms);
        CHECK(t.implied_vol >= 0.05);
        CHECK(t.implied_vol <= 4.5);
        CHECK(t.amount >= 0.1);
        CHECK(t.option_price > 0.0);
        CHECK(t.index_price > 0.0);
        CHECK(std::fmod(t.strike, 50.0) == 0.0);
    }

    std::ostringstream csv;
    write_trades_csv(csv, ds.trades);
    std::istringstream in(csv.str());
    const TradeParseResult parsed = parse_trades(in, TradeFormat::Csv);
    CHECK(parsed.report.total_in == ds.trades.size());
    CHECK(parsed.report.dropped_total() == 0);
    CHECK(same_trades(parsed.trades, ds.trades));
}

TEST_CASE("spot path covers the warm up stretch and the tracker is warm") {
    const SynthConfig cfg = small_config(Regime::NullNoise, 2, 48);
    const Dataset ds = generate(cfg);
    CHECK(ds.spot.size() ==
          static_cast<std::size_t>((cfg.spot_warmup_days * 24) +
                                   cfg.horizon_hours));
    CHECK(ds.spot.front().interval_end_ms ==
          cfg.start_ms - cfg.spot_warmup_days * kMillisPerDay +
              kMillisPerHour);
    CHECK(ds.spot.back().interval_end_ms ==
          cfg.start_ms + cfg.horizon_hours * kMillisPerHour);

    const RealizedVolTracker tracker(ds.spot, 15, 365);
    CHECK(tracker.at(cfg.start_ms).has_value());
    CHECK(ds.trades.front().timestamp_ms >= cfg.start_ms);

    // Every trade classifies into a usable band: the targeting ranges leave
    // margin so grid snapping never lands in the excluded tails.
    CleaningReport report;
    const auto classified =
        classify_trades(ds.trades, &tracker, {}, &report);
    CHECK(report.dropped_delta_bounds == 0);
    CHECK(classified.size() == ds.trades.size());
}

TEST_CASE("truth record carries the planted schedules") {
    const Dataset null_ds = generate(small_config(Regime::NullNoise, 5));
    const auto null_truth = nlohmann::json::parse(null_ds.truth_json);
    CHECK(null_truth["regime"] == "null");
    CHECK(null_truth["vol_switches"].empty());
    CHECK(null_truth["drift_blocks"].empty());
    CHECK(null_truth["counts"]["vol_informed_legs"] == 0);
    CHECK(null_truth["counts"]["dir_informed_legs"] == 0);
    CHECK(null_truth["counts"]["trades"] == null_ds.trades.size());

    const Dataset vol_ds =
        generate(small_config(Regime::VolatilityLearning, 5, 600));
    const auto vol_truth = nlohmann::json::parse(vol_ds.truth_json);
    CHECK(!vol_truth["vol_switches"].empty());
    CHECK(vol_truth["drift_blocks"].empty());
    CHECK(vol_truth["counts"]["vol_informed_legs"] > 0);

    const Dataset dir_ds =
        generate(small_config(Regime::DirectionalLearning, 5, 600));
    const auto dir_truth = nlohmann::json::parse(dir_ds.truth_json);
    CHECK(dir_truth["vol_switches"].empty());
    CHECK(!dir_truth["drift_blocks"].empty());
    CHECK(dir_truth["counts"]["dir_informed_legs"] > 0);

    const auto& counts = dir_truth["counts"];
    CHECK(counts["trades"].get<std::int64_t>() ==
          counts["uninformed"].get<std::int64_t>() +
              counts["vol_informed_legs"].get<std::int64_t>() +
              counts["dir_informed_legs"].get<std::int64_t>());
}

TEST_CASE("written datasets are byte stable and parse back") {
    namespace fs = std::filesystem;
    const Dataset ds = generate(small_config(Regime::Mixed, 11, 120));
    const fs::path base =
        fs::temp_directory_path() / "nbp_synth_roundtrip";
    const fs::path dir_a = base / "a";
    const fs::path dir_b = base / "b";
    write_dataset(ds, dir_a, TradeFormat::Csv);
    write_dataset(ds, dir_b, TradeFormat::Csv);

    CHECK(slurp(dir_a / "trades.csv") == slurp(dir_b / "trades.csv"));
    CHECK(slurp(dir_a / "spot.csv") == slurp(dir_b / "spot.csv"));
    CHECK(slurp(dir_a / "truth.json") == slurp(dir_b / "truth.json"));

    const TradeParseResult trades = parse_trades_file(dir_a / "trades.csv");
    CHECK(same_trades(trades.trades, ds.trades));
    const SpotParseResult spot = parse_spot_file(dir_a / "spot.csv");
    REQUIRE(spot.bars.size() == ds.spot.size());
    CHECK(spot.bars.front().close == ds.spot.front().close);
    CHECK(spot.bars.back().volume_usd == ds.spot.back().volume_usd);

    const Dataset jd = generate(small_config(Regime::NullNoise, 12, 48));
    write_dataset(jd, dir_b, TradeFormat::Jsonl);
    const TradeParseResult jl = parse_trades_file(dir_b / "trades.jsonl");
    CHECK(same_trades(jl.trades, jd.trades));

    fs::remove_all(base);
}

TEST_CASE("single seed regime recovery sanity") {
    VerdictConfig vcfg;

    SUBCASE("null noise raises no flags") {
        const Dataset ds = generate(small_config(Regime::NullNoise, 1, 2000));
        const HypothesisVerdict v = analyze_dataset(ds, vcfg);
        CHECK_FALSE(v.limits_to_arbitrage);
        CHECK_FALSE(v.volatility_learning);
        CHECK_FALSE(v.directional_learning);
    }

    SUBCASE("transient impact is read as limits to arbitrage") {
        const Dataset ds =
            generate(small_config(Regime::LimitsToArbitrage, 1, 2000));
        const HypothesisVerdict v = analyze_dataset(ds, vcfg);
        CHECK(v.limits_to_arbitrage);
    }

    SUBCASE("straddle flow ahead of vol switches reads as vol learning") {
        const Dataset ds =
            generate(small_config(Regime::VolatilityLearning, 1, 2000));
        const HypothesisVerdict v = analyze_dataset(ds, vcfg);
        CHECK(v.volatility_learning);
        CHECK_FALSE(v.directional_learning);
    }

    SUBCASE("signed call put pairs read as directional learning") {
        const Dataset ds =
            generate(small_config(Regime::DirectionalLearning, 1, 2000));
        const HypothesisVerdict v = analyze_dataset(ds, vcfg);
        CHECK(v.directional_learning);
        CHECK_FALSE(v.volatility_learning);
    }

    SUBCASE("mixed regime raises both learning flags") {
        const Dataset ds = generate(small_config(Regime::Mixed, 1, 2000));
        const HypothesisVerdict v = analyze_dataset(ds, vcfg);
        CHECK(v.volatility_learning);
        CHECK(v.directional_learning);
    }
}

TEST_CASE("regime names round trip") {
    for (Regime r : {Regime::NullNoise, Regime::LimitsToArbitrage,
                     Regime::VolatilityLearning, Regime::DirectionalLearning,
                     Regime::Mixed})
        CHECK(regime_from(to_string(r)) == r);
    CHECK_THROWS_AS(regime_from("bogus"), ConfigError);
}
