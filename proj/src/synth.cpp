#include "nbp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "nbp/errors.hpp"
#include "nbp/ivcurve.hpp"
#include "nbp/option_math.hpp"
#include "nbp/pressure.hpp"

namespace nbp::synth {

namespace {

constexpr double kHoursPerYear = 365.0 * 24.0;
constexpr double kStrikeStep = 50.0;  // strikes snap to this USD grid
constexpr int kRvWindowDays = 15;

/// The quote level mean-reverts toward base_iv with this hourly factor
/// (half-life about six days). A pure random walk wanders far enough over a
/// couple of thousand hours to hit the IV clamps, and clamped stretches
/// would flatten the very changes the regressions measure.
constexpr double kLevelPhi = 0.995;

/// Deterministic draws layered over mt19937_64. The engine's output stream
/// is pinned by the standard; the <random> distribution classes are not, so
/// the shaping is done by hand to keep datasets byte-identical across
/// standard libraries.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    double uniform() {  // (0, 1), 53-bit resolution
        return (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53;
    }

    double normal() {  // Box-Muller, cosine branch
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
        const auto range = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(eng() % range);
    }

    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        if (lambda > 50.0) {
            // Knuth's product underflows exp(-lambda); the normal
            // approximation is plenty for flow counts this large.
            const double v = lambda + std::sqrt(lambda) * normal();
            return v < 0.5 ? 0 : static_cast<int>(std::llround(v));
        }
        const double limit = std::exp(-lambda);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }
};

/// Smile offsets added to the quote level, indexed by strike-order curve
/// category 1..5 (wings rich, center flat).
constexpr double kSmile[6] = {0.0, 0.04, 0.015, 0.0, 0.015, 0.04};

struct DeltaRange {
    double lo, hi;
};

/// Target |delta| ranges per band, pulled in from the band edges so that
/// snapping the strike to the USD grid can never flip the classified band.
DeltaRange band_range(Moneyness m) {
    switch (m) {
        case Moneyness::DOTM: return {0.030, 0.115};
        case Moneyness::OTM: return {0.140, 0.360};
        case Moneyness::ATM: return {0.400, 0.600};
        case Moneyness::ITM: return {0.645, 0.860};
        case Moneyness::DITM: return {0.885, 0.970};
        case Moneyness::Excluded: break;
    }
    throw DomainError("no target range for the excluded band");
}

double sample_in(Rng& rng, DeltaRange r) {
    return r.lo + (r.hi - r.lo) * rng.uniform();
}

Moneyness uninformed_band(Rng& rng) {
    const double u = rng.uniform();
    if (u < 0.15) return Moneyness::DOTM;
    if (u < 0.40) return Moneyness::OTM;
    if (u < 0.75) return Moneyness::ATM;
    if (u < 0.90) return Moneyness::ITM;
    return Moneyness::DITM;
}

/// Informed flow concentrates where the regression battery looks.
Moneyness informed_band(Rng& rng) {
    const double u = rng.uniform();
    if (u < 0.50) return Moneyness::ATM;
    if (u < 0.80) return Moneyness::OTM;
    return Moneyness::DOTM;
}

double draw_amount(Rng& rng, const FlowParams& flow) {
    const double a =
        flow.median_amount * std::exp(flow.amount_log_sd * rng.normal());
    return std::max(0.1, std::round(a * 10.0) / 10.0);  // 0.1-contract steps
}

int uninformed_days(Rng& rng) {
    const double u = rng.uniform();
    if (u < 0.45) return static_cast<int>(rng.uniform_int(2, 7));
    if (u < 0.80) return static_cast<int>(rng.uniform_int(8, 21));
    return static_cast<int>(rng.uniform_int(22, 45));
}

enum class Role : std::uint8_t { Uninformed, VolInformed, DirInformed };

struct Stub {
    Millis ts = 0;
    Role role = Role::Uninformed;
    OptionType type = OptionType::Call;
    Direction dir = Direction::Buy;
    Moneyness band = Moneyness::ATM;
    double call_delta = 0.5;  // strike target on the call-delta scale
    int days = 7;
    double amount = 0.1;
    double noise = 0.0;
};

struct VolSwitch {
    int hour;
    double vol;  // state in force from this hour on
};

struct DriftBlock {
    int start_hour;
    int hours;
    double drift;
};

void require(bool ok, const char* field) {
    if (!ok) throw ConfigError(std::string("synthetic config: bad ") + field);
}

}  // namespace

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::NullNoise: return "null";
        case Regime::LimitsToArbitrage: return "limits";
        case Regime::VolatilityLearning: return "volatility";
        case Regime::DirectionalLearning: return "directional";
        case Regime::Mixed: return "mixed";
    }
    return "?";
}

Regime regime_from(std::string_view s) {
    if (s == "null") return Regime::NullNoise;
    if (s == "limits") return Regime::LimitsToArbitrage;
    if (s == "volatility") return Regime::VolatilityLearning;
    if (s == "directional") return Regime::DirectionalLearning;
    if (s == "mixed") return Regime::Mixed;
    throw ConfigError("unknown regime: " + std::string(s));
}

void validate_config(const SynthConfig& cfg) {
    require(cfg.horizon_hours >= 1, "horizon_hours");
    require(cfg.start_ms % kMillisPerHour == 0, "start_ms (not hour aligned)");
    // The realized-vol window must be warm before the first trade.
    require(cfg.spot_warmup_days >= kRvWindowDays + 1, "spot_warmup_days");

    const UnderlyingParams& u = cfg.underlying;
    require(u.s0 > 0.0, "underlying.s0");
    require(u.vol > 0.0, "underlying.vol");
    require(u.vol_high > 0.0, "underlying.vol_high");
    require(u.vol_low > 0.0, "underlying.vol_low");
    require(u.drift_mag >= 0.0, "underlying.drift_mag");
    require(u.jump_intensity >= 0.0, "underlying.jump_intensity");
    require(u.jump_sd >= 0.0, "underlying.jump_sd");

    const QuoteParams& q = cfg.quote;
    require(q.iv_floor > 0.0, "quote.iv_floor");
    // Anything above 5 would be dropped by ingest cleaning as implausible.
    require(q.iv_cap > q.iv_floor && q.iv_cap <= 5.0, "quote.iv_cap");
    require(q.base_iv >= q.iv_floor && q.base_iv <= q.iv_cap, "quote.base_iv");
    require(q.news_sd >= 0.0, "quote.news_sd");
    require(q.trade_noise_sd >= 0.0, "quote.trade_noise_sd");
    require(q.kappa >= 0.0 && q.kappa <= 1.0, "quote.kappa");
    require(q.transient_impact >= 0.0, "quote.transient_impact");
    require(q.permanent_impact >= 0.0, "quote.permanent_impact");

    const FlowParams& f = cfg.flow;
    require(f.uninformed_per_hour >= 0.0, "flow.uninformed_per_hour");
    require(f.informed_per_hour >= 0.0, "flow.informed_per_hour");
    require(f.lead_hours >= 0, "flow.lead_hours");
    require(f.median_amount > 0.0, "flow.median_amount");
    require(f.amount_log_sd >= 0.0, "flow.amount_log_sd");
    require(f.block_min_hours > 0, "flow.block_min_hours");
    require(f.block_max_hours >= f.block_min_hours, "flow.block_max_hours");
    // Informed lead windows must fit inside one state block.
    require(f.block_min_hours >= f.lead_hours,
            "flow.lead_hours (exceeds block_min_hours)");
}

Dataset generate(const SynthConfig& cfg) {
    validate_config(cfg);
    Rng rng(cfg.seed);

    const int horizon = cfg.horizon_hours;
    const int warmup_hours = cfg.spot_warmup_days * 24;
    const int total_hours = warmup_hours + horizon;
    const Millis warmup_start =
        cfg.start_ms - static_cast<Millis>(warmup_hours) * kMillisPerHour;

    const bool vol_regime = cfg.regime == Regime::VolatilityLearning ||
                            cfg.regime == Regime::Mixed;
    const bool dir_regime = cfg.regime == Regime::DirectionalLearning ||
                            cfg.regime == Regime::Mixed;
    const bool limits_regime = cfg.regime == Regime::LimitsToArbitrage;

    // Planted state schedules over the trading horizon. Volatility states
    // alternate low/high; informed straddle flow runs through the lead
    // window before each switch. Drift blocks alternate sign; informed
    // call/put pairs run through the first lead_hours of each block, while
    // the information edge is fresh.
    std::vector<double> vol_state(horizon, cfg.underlying.vol);
    std::vector<int> vol_signal(horizon, 0);
    std::vector<double> drift_state(horizon, 0.0);
    std::vector<int> dir_signal(horizon, 0);
    std::vector<VolSwitch> vol_switches;
    std::vector<DriftBlock> drift_blocks;

    if (vol_regime) {
        double cur = rng.uniform() < 0.5 ? cfg.underlying.vol_low
                                         : cfg.underlying.vol_high;
        int h = 0;
        vol_switches.push_back({0, cur});
        while (h < horizon) {
            const int len = static_cast<int>(rng.uniform_int(
                cfg.flow.block_min_hours, cfg.flow.block_max_hours));
            const int end = std::min(horizon, h + len);
            for (int i = h; i < end; ++i) vol_state[i] = cur;
            const double next = cur == cfg.underlying.vol_high
                                    ? cfg.underlying.vol_low
                                    : cfg.underlying.vol_high;
            if (h + len < horizon) {
                vol_switches.push_back({h + len, next});
                const int sign = next > cur ? 1 : -1;
                for (int i = std::max(0, h + len - cfg.flow.lead_hours);
                     i < h + len; ++i)
                    vol_signal[i] = sign;
            }
            h += len;
            cur = next;
        }
    }
    if (dir_regime) {
        int sign = rng.uniform() < 0.5 ? 1 : -1;
        int h = 0;
        while (h < horizon) {
            const int len = static_cast<int>(rng.uniform_int(
                cfg.flow.block_min_hours, cfg.flow.block_max_hours));
            const int end = std::min(horizon, h + len);
            drift_blocks.push_back(
                {h, end - h, sign * cfg.underlying.drift_mag});
            for (int i = h; i < end; ++i) {
                drift_state[i] = sign * cfg.underlying.drift_mag;
                if (i < h + cfg.flow.lead_hours) dir_signal[i] = sign;
            }
            h += len;
            sign = -sign;
        }
    }

    // Hourly jump-diffusion path; the warm-up stretch trades nothing but
    // seeds the realized-vol window.
    const double dt = 1.0 / kHoursPerYear;
    const double sqrt_dt = std::sqrt(dt);
    std::vector<double> path(static_cast<std::size_t>(total_hours) + 1);
    path[0] = cfg.underlying.s0;
    Dataset ds;
    ds.spot.reserve(total_hours);
    double log_s = std::log(cfg.underlying.s0);
    for (int i = 0; i < total_hours; ++i) {
        const int h = i - warmup_hours;
        const double sigma = h >= 0 ? vol_state[h] : cfg.underlying.vol;
        const double mu = h >= 0 ? drift_state[h] : 0.0;
        double step = (mu - 0.5 * sigma * sigma) * dt +
                      sigma * sqrt_dt * rng.normal();
        const int jumps = rng.poisson(cfg.underlying.jump_intensity * dt);
        for (int j = 0; j < jumps; ++j)
            step += cfg.underlying.jump_sd * rng.normal();
        log_s += step;
        path[static_cast<std::size_t>(i) + 1] = std::exp(log_s);
        const double volume = 2e7 * std::exp(0.6 * rng.normal());
        ds.spot.push_back({warmup_start +
                               static_cast<Millis>(i + 1) * kMillisPerHour,
                           path[static_cast<std::size_t>(i) + 1], volume});
    }

    const RealizedVolTracker tracker(ds.spot, kRvWindowDays, kDaysPerYear);

    // Quote state. The level carries news; the permanent offsets integrate
    // informed flow; the transient term integrates all flow and decays.
    double level = cfg.quote.base_iv;
    double level_perm = 0.0;
    double type_perm[2] = {0.0, 0.0};
    double transient = 0.0;

    std::int64_t n_uninformed = 0;
    std::int64_t n_vol_legs = 0;
    std::int64_t n_dir_legs = 0;

    std::vector<Stub> stubs;
    for (int h = 0; h < horizon; ++h) {
        const Millis hour_start =
            cfg.start_ms + static_cast<Millis>(h) * kMillisPerHour;
        const double spot = path[static_cast<std::size_t>(warmup_hours + h)];

        stubs.clear();
        const int n_u = rng.poisson(cfg.flow.uninformed_per_hour);
        for (int i = 0; i < n_u; ++i) {
            Stub s;
            s.ts = hour_start + rng.uniform_int(0, kMillisPerHour - 1);
            s.role = Role::Uninformed;
            s.band = uninformed_band(rng);
            s.type = rng.uniform() < 0.5 ? OptionType::Call : OptionType::Put;
            s.dir = rng.uniform() < 0.5 ? Direction::Buy : Direction::Sell;
            const double target = sample_in(rng, band_range(s.band));
            s.call_delta = s.type == OptionType::Call ? target : 1.0 - target;
            s.days = uninformed_days(rng);
            s.amount = draw_amount(rng, cfg.flow);
            s.noise = rng.normal();
            stubs.push_back(s);
        }
        if (vol_signal[h] != 0) {
            const int n = rng.poisson(cfg.flow.informed_per_hour);
            const Direction dir =
                vol_signal[h] > 0 ? Direction::Buy : Direction::Sell;
            for (int i = 0; i < n; ++i) {
                // A straddle: call and put legs in the same band, same side.
                const Millis ts =
                    hour_start + rng.uniform_int(0, kMillisPerHour - 1);
                const Moneyness band = informed_band(rng);
                const int days = static_cast<int>(rng.uniform_int(3, 14));
                const double amount = draw_amount(rng, cfg.flow);
                Stub call{ts, Role::VolInformed, OptionType::Call, dir, band,
                          sample_in(rng, band_range(band)), days, amount,
                          rng.normal()};
                Stub put{ts, Role::VolInformed, OptionType::Put, dir, band,
                         1.0 - sample_in(rng, band_range(band)), days, amount,
                         rng.normal()};
                stubs.push_back(call);
                stubs.push_back(put);
            }
        }
        if (dir_signal[h] != 0) {
            const int n = rng.poisson(cfg.flow.informed_per_hour);
            const Direction call_dir =
                dir_signal[h] > 0 ? Direction::Buy : Direction::Sell;
            const Direction put_dir =
                dir_signal[h] > 0 ? Direction::Sell : Direction::Buy;
            for (int i = 0; i < n; ++i) {
                // Upward drift: buy calls, sell puts. Downward: mirrored.
                const Millis ts =
                    hour_start + rng.uniform_int(0, kMillisPerHour - 1);
                const Moneyness band = informed_band(rng);
                const int days = static_cast<int>(rng.uniform_int(3, 14));
                const double amount = draw_amount(rng, cfg.flow);
                Stub call{ts,   Role::DirInformed, OptionType::Call,
                          call_dir, band,
                          sample_in(rng, band_range(band)), days, amount,
                          rng.normal()};
                Stub put{ts,  Role::DirInformed, OptionType::Put,
                         put_dir, band,
                         1.0 - sample_in(rng, band_range(band)), days, amount,
                         rng.normal()};
                stubs.push_back(call);
                stubs.push_back(put);
            }
        }

        // Time order within the hour so state updates apply as trades
        // arrive; creation index breaks timestamp ties deterministically.
        std::vector<std::size_t> order(stubs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) {
                      if (stubs[a].ts != stubs[b].ts)
                          return stubs[a].ts < stubs[b].ts;
                      return a < b;
                  });

        for (std::size_t idx : order) {
            const Stub& s = stubs[idx];
            const auto rv = tracker.at(s.ts);
            if (!rv)
                throw NumericError(
                    "realized vol window not warm at trade time");
            const double sigma_rv = *rv;

            const Millis expiry = floor_to_day(s.ts) +
                                  static_cast<Millis>(s.days) * kMillisPerDay +
                                  8 * kMillisPerHour;
            const double tau = years_between(s.ts, expiry);
            const double sv = sigma_rv * std::sqrt(tau);
            const double raw_strike =
                spot * std::exp(0.5 * sv * sv - sv * norm_cdf_inv(s.call_delta));
            const double strike = std::max(
                kStrikeStep, std::round(raw_strike / kStrikeStep) * kStrikeStep);

            // Measured exactly as the analysis pass will measure it, so the
            // trade lands in the intended cell and the impact bookkeeping
            // uses the same delta-weighted flow the regressions see.
            const double measured = bs_delta(
                {spot, strike, tau, sigma_rv, 0.0, s.type});
            const Moneyness band = classify_moneyness(measured);
            const int cat = band == Moneyness::Excluded
                                ? curve_category(s.type, s.band)
                                : curve_category(s.type, band);

            double sigma_q = level + kSmile[cat] + s.noise *
                             cfg.quote.trade_noise_sd;
            if (vol_regime) sigma_q += level_perm;
            if (dir_regime) sigma_q += type_perm[static_cast<int>(s.type)];
            if (limits_regime) sigma_q += transient;
            sigma_q = std::clamp(sigma_q, cfg.quote.iv_floor, cfg.quote.iv_cap);

            const double price_usd =
                bs_price({spot, strike, tau, sigma_q, 0.0, s.type});

            const double sign = s.dir == Direction::Buy ? 1.0 : -1.0;
            const double dw_musd =
                sign * std::fabs(measured) * s.amount * spot / 1e6;
            if (limits_regime)
                transient += cfg.quote.transient_impact * dw_musd;
            if (vol_regime && s.role == Role::VolInformed)
                level_perm += cfg.quote.permanent_impact * dw_musd;
            if (dir_regime && s.role == Role::DirInformed)
                type_perm[static_cast<int>(s.type)] +=
                    cfg.quote.permanent_impact * dw_musd;

            switch (s.role) {
                case Role::Uninformed: ++n_uninformed; break;
                case Role::VolInformed: ++n_vol_legs; break;
                case Role::DirInformed: ++n_dir_legs; break;
            }
            ds.trades.push_back({s.ts, expiry, strike, s.type, s.dir,
                                 s.amount, price_usd / spot, sigma_q, spot});
        }

        level = cfg.quote.base_iv +
                kLevelPhi * (level - cfg.quote.base_iv) +
                cfg.quote.news_sd * rng.normal();
        transient *= 1.0 - cfg.quote.kappa;
    }

    nlohmann::json truth;
    truth["regime"] = to_string(cfg.regime);
    truth["seed"] = cfg.seed;
    truth["horizon_hours"] = cfg.horizon_hours;
    truth["start_ms"] = cfg.start_ms;
    truth["spot_warmup_days"] = cfg.spot_warmup_days;
    truth["underlying"] = {{"s0", cfg.underlying.s0},
                           {"vol", cfg.underlying.vol},
                           {"vol_high", cfg.underlying.vol_high},
                           {"vol_low", cfg.underlying.vol_low},
                           {"drift_mag", cfg.underlying.drift_mag},
                           {"jump_intensity", cfg.underlying.jump_intensity},
                           {"jump_sd", cfg.underlying.jump_sd}};
    truth["quote"] = {{"base_iv", cfg.quote.base_iv},
                      {"news_sd", cfg.quote.news_sd},
                      {"trade_noise_sd", cfg.quote.trade_noise_sd},
                      {"kappa", cfg.quote.kappa},
                      {"transient_impact", cfg.quote.transient_impact},
                      {"permanent_impact", cfg.quote.permanent_impact},
                      {"iv_floor", cfg.quote.iv_floor},
                      {"iv_cap", cfg.quote.iv_cap}};
    truth["flow"] = {{"uninformed_per_hour", cfg.flow.uninformed_per_hour},
                     {"informed_per_hour", cfg.flow.informed_per_hour},
                     {"lead_hours", cfg.flow.lead_hours},
                     {"median_amount", cfg.flow.median_amount},
                     {"amount_log_sd", cfg.flow.amount_log_sd},
                     {"block_min_hours", cfg.flow.block_min_hours},
                     {"block_max_hours", cfg.flow.block_max_hours}};
    truth["vol_switches"] = nlohmann::json::array();
    for (const VolSwitch& s : vol_switches)
        truth["vol_switches"].push_back({{"hour", s.hour}, {"vol", s.vol}});
    truth["drift_blocks"] = nlohmann::json::array();
    for (const DriftBlock& b : drift_blocks)
        truth["drift_blocks"].push_back({{"start_hour", b.start_hour},
                                         {"hours", b.hours},
                                         {"drift", b.drift}});
    truth["counts"] = {{"trades", ds.trades.size()},
                       {"uninformed", n_uninformed},
                       {"vol_informed_legs", n_vol_legs},
                       {"dir_informed_legs", n_dir_legs}};
    ds.truth_json = truth.dump(2);
    ds.truth_json += '\n';
    return ds;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& dir,
                   TradeFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory " + dir.string() + ": " +
                      ec.message());
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / name).string());
        return out;
    };
    if (format == TradeFormat::Csv) {
        auto out = open("trades.csv");
        write_trades_csv(out, ds.trades);
    } else {
        auto out = open("trades.jsonl");
        write_trades_jsonl(out, ds.trades);
    }
    {
        auto out = open("spot.csv");
        write_spot_csv(out, ds.spot);
    }
    {
        auto out = open("truth.json");
        out << ds.truth_json;
    }
}

std::vector<RegressionResult> canonical_battery(const PressureFrame& frame,
                                                const OlsOptions& opts) {
    std::vector<RegressionResult> out;
    auto keep = [&](auto&& run) {
        try {
            out.push_back(run());
        } catch (const InsufficientRowsError&) {
        } catch (const RankError&) {
        } catch (const DomainError&) {
        }
    };
    for (OptionType j : {OptionType::Call, OptionType::Put})
        keep([&] { return run_atm_pressure(frame, j, {}, opts); });
    for (Moneyness k : {Moneyness::ATM, Moneyness::OTM, Moneyness::DOTM})
        for (OptionType j : {OptionType::Call, OptionType::Put})
            keep([&] { return run_decomposition(frame, k, j, {}, opts); });
    return out;
}

HypothesisVerdict analyze_dataset(const Dataset& ds,
                                  const VerdictConfig& vcfg) {
    const RealizedVolTracker tracker(ds.spot, kRvWindowDays, kDaysPerYear);
    const ClassifyConfig ccfg;  // realized-vol deltas, zero rate
    const auto classified =
        classify_trades(ds.trades, &tracker, ccfg, nullptr);
    const AggregateMap aggs =
        bucket_trades(ds.trades, classified, kMillisPerHour);
    FrameInputs inputs;
    inputs.bars = ds.spot;
    inputs.rv = &tracker;
    const PressureFrame frame = build_frame(
        aggs, kMillisPerHour, MaturityBucket::All, TodSlot::All, inputs);
    const auto results = canonical_battery(frame, {});
    if (results.empty())
        throw DomainError("no battery slice could be fitted");
    return evaluate_verdict(results, vcfg);
}

RecoveryReport validate_regimes(const SynthConfig& base, int n_seeds,
                                std::span<const Regime> regimes,
                                std::ostream* progress) {
    if (n_seeds < 1) throw ConfigError("validate: need at least one seed");
    RecoveryReport report;
    report.horizon_hours = base.horizon_hours;
    report.base_seed = base.seed;
    for (Regime regime : regimes) {
        RegimeRecovery row;
        row.regime = regime;
        row.seeds = n_seeds;
        for (int i = 0; i < n_seeds; ++i) {
            SynthConfig cfg = base;
            cfg.regime = regime;
            cfg.seed = base.seed + static_cast<std::uint64_t>(i);
            try {
                const Dataset ds = generate(cfg);
                const HypothesisVerdict v = analyze_dataset(ds);
                if (v.limits_to_arbitrage) ++row.limits;
                if (v.volatility_learning) ++row.volatility;
                if (v.directional_learning) ++row.directional;
            } catch (const Error&) {
                ++row.failed;
            }
        }
        if (progress) {
            *progress << to_string(regime) << ": limits " << row.limits << '/'
                      << n_seeds << " volatility " << row.volatility << '/'
                      << n_seeds << " directional " << row.directional << '/'
                      << n_seeds << " failed " << row.failed << '\n';
            progress->flush();
        }
        report.rows.push_back(row);
    }
    return report;
}

std::string recovery_json(const RecoveryReport& report) {
    nlohmann::json j;
    j["horizon_hours"] = report.horizon_hours;
    j["base_seed"] = report.base_seed;
    j["rows"] = nlohmann::json::array();
    for (const RegimeRecovery& r : report.rows)
        j["rows"].push_back({{"regime", to_string(r.regime)},
                             {"seeds", r.seeds},
                             {"limits", r.limits},
                             {"volatility", r.volatility},
                             {"directional", r.directional},
                             {"failed", r.failed}});
    std::string out = j.dump(2);
    out += '\n';
    return out;
}

}  // namespace nbp::synth
