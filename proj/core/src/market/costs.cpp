#include "dcgridsim/market/costs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcgridsim::market {

void MarketData::validate(std::int64_t t0, std::int64_t t1) const {
    if (!energy_price.covers(t0, t1))
        throw std::invalid_argument("market data: energy price series does not cover the run span");
    if (!regulation_price.covers(t0, t1))
        throw std::invalid_argument("market data: regulation price series does not cover the run span");
    if (!reg_signal.covers(t0, t1))
        throw std::invalid_argument("market data: regulation signal does not cover the run span");
    for (double v : energy_price.values())
        if (v < 0.0) throw std::invalid_argument("market data: negative energy price");
    for (double v : regulation_price.values())
        if (v < 0.0) throw std::invalid_argument("market data: negative regulation price");
    for (double v : reg_signal.values())
        if (v < -1.0 || v > 1.0)
            throw std::invalid_argument("market data: regulation signal outside [-1, 1]");
    if (demand_price < 0.0) throw std::invalid_argument("market data: negative demand price");
}

double energy_cost(const TimeSeries& price, const TimeSeries& power_kw) {
    if (price.start_s() != power_kw.start_s() || price.end_s() != power_kw.end_s())
        throw std::invalid_argument("energy_cost: price and power spans differ");
    const double interval_h = static_cast<double>(price.step_s()) / 3600.0;
    double cost = 0.0;
    for (std::size_t i = 0; i < price.size(); ++i) {
        const std::int64_t t0 = price.start_s() + price.step_s() * static_cast<std::int64_t>(i);
        cost += price[i] * power_kw.mean_over(t0, t0 + price.step_s()) * interval_h;
    }
    return cost;
}

double peak_demand_30min(const TimeSeries& power_kw) {
    constexpr std::int64_t kInterval = 1800;
    const std::int64_t span = power_kw.end_s() - power_kw.start_s();
    if (span < kInterval)
        throw std::invalid_argument("peak_demand_30min: span shorter than one 30-min interval");
    const auto n_intervals = span / kInterval; // trailing partial interval ignored
    double peak = 0.0;
    for (std::int64_t i = 0; i < n_intervals; ++i) {
        const std::int64_t t0 = power_kw.start_s() + i * kInterval;
        peak = std::max(peak, power_kw.mean_over(t0, t0 + kInterval));
    }
    return peak;
}

double demand_penalty(const TimeSeries& power_kw, double demand_limit_kw, double demand_price) {
    const double over = peak_demand_30min(power_kw) - demand_limit_kw;
    return std::max(over, 0.0) * demand_price;
}

double regulation_revenue(const TimeSeries& price, const TimeSeries& capacity_kw) {
    if (price.step_s() != capacity_kw.step_s() || price.start_s() != capacity_kw.start_s() ||
        price.end_s() != capacity_kw.end_s())
        throw std::invalid_argument("regulation_revenue: series not hourly-aligned");
    double revenue = 0.0;
    for (std::size_t i = 0; i < capacity_kw.size(); ++i) {
        if (capacity_kw[i] < 0.0)
            throw std::invalid_argument("regulation_revenue: negative reserved capacity");
        revenue += price[i] * capacity_kw[i];
    }
    return revenue;
}

} // namespace dcgridsim::market
