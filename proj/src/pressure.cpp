#include "nbp/pressure.hpp"

#include <cmath>
#include <limits>

#include "nbp/errors.hpp"

namespace nbp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t floor_div(Millis num, Millis den) {
    std::int64_t q = num / den;
    if (num % den != 0 && ((num < 0) != (den < 0))) --q;
    return q;
}

}  // namespace

int band_index(Moneyness m) {
    switch (m) {
        case Moneyness::DOTM: return 0;
        case Moneyness::OTM: return 1;
        case Moneyness::ATM: return 2;
        case Moneyness::ITM: return 3;
        case Moneyness::DITM: return 4;
        case Moneyness::Excluded: break;
    }
    throw DomainError("excluded moneyness has no band index");
}

std::vector<ClassifiedTrade> classify_trades(std::span<const TradeTick> trades,
                                             const RealizedVolTracker* rv,
                                             const ClassifyConfig& cfg,
                                             CleaningReport* report) {
    if (cfg.sigma_source != SigmaSource::TradeIv && rv == nullptr)
        throw DomainError("realized-vol tracker required for rv sigma sources");

    std::vector<ClassifiedTrade> out;
    out.reserve(trades.size());
    for (std::size_t i = 0; i < trades.size(); ++i) {
        const TradeTick& t = trades[i];
        double sigma;
        if (cfg.sigma_source == SigmaSource::TradeIv) {
            sigma = t.implied_vol;
        } else {
            const auto v = rv->at(t.timestamp_ms);
            if (!v) {
                // Realized-vol window still warming up: no usable delta.
                if (report) ++report->dropped_delta_bounds;
                continue;
            }
            sigma = *v;
        }

        OptionContext ctx;
        ctx.spot = t.index_price;
        ctx.strike = t.strike;
        ctx.tau = years_between(t.timestamp_ms, t.expiry_ms);
        ctx.sigma = sigma;
        ctx.rate = cfg.rate;
        ctx.option_type = t.option_type;
        const double delta = bs_delta(ctx);

        const Moneyness m = classify_moneyness(delta);
        if (m == Moneyness::Excluded) {
            if (report) ++report->dropped_delta_bounds;
            continue;
        }

        ClassifiedTrade c;
        c.trade_index = static_cast<std::uint32_t>(i);
        c.delta = delta;
        c.moneyness = m;
        c.maturity = maturity_bucket(maturity_days(t.timestamp_ms, t.expiry_ms));
        c.tod = tod_slot(t.timestamp_ms);
        c.flow_usd = t.amount * t.index_price;
        c.dw_flow_usd = c.flow_usd * std::fabs(delta);
        out.push_back(c);
    }
    return out;
}

double category_pressure(const CellAggregate& agg) {
    return agg.buy_dw - agg.sell_dw;
}

AggregateMap bucket_trades(std::span<const TradeTick> trades,
                           std::span<const ClassifiedTrade> classified,
                           Millis width_ms) {
    if (width_ms <= 0) throw DomainError("interval width must be positive");
    AggregateMap map;
    for (const ClassifiedTrade& c : classified) {
        const TradeTick& t = trades[c.trade_index];
        BucketKey key;
        key.interval = floor_div(t.timestamp_ms, width_ms);
        key.moneyness = c.moneyness;
        key.option_type = t.option_type;
        key.maturity = c.maturity;
        key.tod = c.tod;
        CellAggregate& agg = map[key];
        if (t.direction == Direction::Buy)
            agg.buy_dw += c.dw_flow_usd;
        else
            agg.sell_dw += c.dw_flow_usd;
        agg.flow_usd += c.flow_usd;
        agg.iv_sum += t.implied_vol;
        ++agg.trades;
    }
    return map;
}

AggregateMap rebucket(const AggregateMap& fine, Millis fine_width_ms,
                      Millis coarse_width_ms) {
    if (coarse_width_ms <= 0 || fine_width_ms <= 0 ||
        coarse_width_ms % fine_width_ms != 0)
        throw DomainError("coarse width must be a multiple of the fine width");
    const Millis factor = coarse_width_ms / fine_width_ms;
    AggregateMap out;
    for (const auto& [key, agg] : fine) {
        BucketKey coarse = key;
        coarse.interval = floor_div(key.interval, factor);
        CellAggregate& acc = out[coarse];
        acc.buy_dw += agg.buy_dw;
        acc.sell_dw += agg.sell_dw;
        acc.flow_usd += agg.flow_usd;
        acc.iv_sum += agg.iv_sum;
        acc.trades += agg.trades;
    }
    return out;
}

Decomposition decompose(double a_call, double a_put) {
    Decomposition d;
    d.d_call = 0.5 * (a_call - a_put);
    d.d_put = -d.d_call;
    d.v = 0.5 * (a_call + a_put);
    return d;
}

RelativePressure relative_pressure(double d_call, double v, double total_dw) {
    RelativePressure r;
    if (total_dw > 0.0) {
        r.rel_d = d_call / total_dw;
        r.rel_v = v / total_dw;
    }
    return r;
}

std::vector<double> change_series(std::span<const double> level,
                                  std::span<const std::int64_t> counts) {
    std::vector<double> out(level.size(), kNaN);
    for (std::size_t i = 1; i < level.size(); ++i) {
        if (counts[i] > 0 && counts[i - 1] > 0)
            out[i] = level[i] - level[i - 1];
    }
    return out;
}

std::vector<double> change_series(std::span<const double> level) {
    std::vector<double> out(level.size(), kNaN);
    for (std::size_t i = 1; i < level.size(); ++i) {
        if (std::isfinite(level[i]) && std::isfinite(level[i - 1]))
            out[i] = level[i] - level[i - 1];
    }
    return out;
}

std::int64_t IntervalGrid::offset_of(Millis ts) const {
    const std::int64_t idx = floor_div(ts, width_ms) - first;
    return (idx >= 0 && idx < count) ? idx : -1;
}

SpotSeries spot_series(std::span<const SpotBar> bars,
                       const IntervalGrid& grid) {
    const std::size_t n = static_cast<std::size_t>(grid.count);
    SpotSeries s;
    s.log_return.assign(n, kNaN);
    s.volume_usd.assign(n, 0.0);

    std::size_t next = 0;  // first bar not yet consumed
    double prev_close = kNaN;
    // Advance to the last close at or before the grid's opening instant.
    while (next < bars.size() &&
           bars[next].interval_end_ms <= grid.start_ms(0)) {
        prev_close = bars[next].close;
        ++next;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Millis end = grid.end_ms(static_cast<std::int64_t>(i));
        double close = kNaN;
        bool fresh = false;
        while (next < bars.size() && bars[next].interval_end_ms <= end) {
            close = bars[next].close;
            s.volume_usd[i] += bars[next].volume_usd;
            fresh = true;
            ++next;
        }
        if (fresh && std::isfinite(prev_close))
            s.log_return[i] = std::log(close / prev_close);
        if (fresh) prev_close = close;
    }
    return s;
}

PressureFrame build_frame(const AggregateMap& aggs, Millis width_ms,
                          MaturityBucket maturity, TodSlot tod,
                          const FrameInputs& inputs) {
    PressureFrame f;
    f.maturity = maturity;
    f.tod = tod;
    f.iv_scale = inputs.iv_scale;
    f.grid.width_ms = width_ms;
    if (aggs.empty()) return f;
    f.grid.first = aggs.begin()->first.interval;
    f.grid.count = aggs.rbegin()->first.interval - f.grid.first + 1;
    const std::size_t n = static_cast<std::size_t>(f.grid.count);

    // Roll matching buckets up to (interval, band, type) cells. The map is
    // ordered, so accumulation order is stable across runs.
    struct CellAcc {
        std::vector<CellAggregate> acc;
    };
    CellAcc cells[kMoneynessBands][2];
    for (auto& row : cells)
        for (auto& c : row) c.acc.assign(n, {});

    for (const auto& [key, agg] : aggs) {
        if (maturity != MaturityBucket::All && key.maturity != maturity)
            continue;
        if (tod != TodSlot::All && key.tod != tod) continue;
        const std::size_t i = static_cast<std::size_t>(key.interval - f.grid.first);
        CellAggregate& acc =
            cells[band_index(key.moneyness)][static_cast<int>(key.option_type)]
                .acc[i];
        acc.buy_dw += agg.buy_dw;
        acc.sell_dw += agg.sell_dw;
        acc.flow_usd += agg.flow_usd;
        acc.iv_sum += agg.iv_sum;
        acc.trades += agg.trades;
    }

    f.imbalance.assign(n, 0.0);
    f.mean_iv_all.assign(n, kNaN);
    f.trades_all.assign(n, 0);
    f.option_volume.assign(n, 0.0);
    std::vector<double> iv_sum_all(n, 0.0);

    for (int b = 0; b < kMoneynessBands; ++b) {
        for (int j = 0; j < 2; ++j) {
            CellSeries& cs = f.cell[b][j];
            cs.pressure.assign(n, 0.0);
            cs.mean_iv.assign(n, kNaN);
            cs.volume_dw.assign(n, 0.0);
            cs.trades.assign(n, 0);
            for (std::size_t i = 0; i < n; ++i) {
                const CellAggregate& acc = cells[b][j].acc[i];
                cs.pressure[i] = category_pressure(acc);
                cs.volume_dw[i] = acc.total_dw();
                cs.trades[i] = acc.trades;
                if (acc.trades > 0) cs.mean_iv[i] = acc.iv_sum / acc.trades;
                f.imbalance[i] += cs.pressure[i];
                f.option_volume[i] += acc.flow_usd;
                f.trades_all[i] += acc.trades;
                iv_sum_all[i] += acc.iv_sum;
            }
            cs.delta_iv = change_series(cs.mean_iv, cs.trades);
            for (double& d : cs.delta_iv) d *= f.iv_scale;
        }

        GroupSeries& g = f.group[b];
        g.d_call.assign(n, 0.0);
        g.v.assign(n, 0.0);
        g.total_dw.assign(n, 0.0);
        g.rel_d.assign(n, 0.0);
        g.rel_v.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const Decomposition d = decompose(f.cell[b][0].pressure[i],
                                              f.cell[b][1].pressure[i]);
            g.d_call[i] = d.d_call;
            g.v[i] = d.v;
            g.total_dw[i] =
                f.cell[b][0].volume_dw[i] + f.cell[b][1].volume_dw[i];
            const RelativePressure rel =
                relative_pressure(d.d_call, d.v, g.total_dw[i]);
            g.rel_d[i] = rel.rel_d;
            g.rel_v[i] = rel.rel_v;
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        if (f.trades_all[i] > 0)
            f.mean_iv_all[i] = iv_sum_all[i] / static_cast<double>(f.trades_all[i]);
    f.delta_iv_all = change_series(f.mean_iv_all, f.trades_all);
    for (double& d : f.delta_iv_all) d *= f.iv_scale;
    // Volume is observable even in empty intervals (a genuine zero), so its
    // differences never gap.
    f.delta_option_volume = change_series(f.option_volume);

    if (!inputs.bars.empty()) {
        const SpotSeries ss = spot_series(inputs.bars, f.grid);
        f.spot_return = ss.log_return;
        f.spot_volume = ss.volume_usd;
    } else {
        f.spot_return.assign(n, kNaN);
        f.spot_volume.assign(n, kNaN);
    }

    f.realized_vol.assign(n, kNaN);
    if (inputs.rv != nullptr) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = inputs.rv->at(f.grid.end_ms(static_cast<std::int64_t>(i)));
            if (v) f.realized_vol[i] = *v;
        }
    }
    f.delta_realized_vol = change_series(f.realized_vol);
    for (double& d : f.delta_realized_vol) d *= f.iv_scale;

    return f;
}

}  // namespace nbp
