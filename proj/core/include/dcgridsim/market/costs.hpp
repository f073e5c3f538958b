#pragma once

#include "dcgridsim/timeseries.hpp"

#include <string>

namespace dcgridsim::market {

/// Market inputs for one run.
struct MarketData {
    TimeSeries energy_price;     ///< $/kWh, hourly
    TimeSeries regulation_price; ///< $/kW per hour of reserved capacity, hourly
    double demand_price = 7.48;  ///< $/kW on the peak 30-min average
    TimeSeries reg_signal;       ///< RegD in [-1, 1], 4 s cadence

    void validate(std::int64_t span_start_s, std::int64_t span_end_s) const;
};

struct CostReport {
    double energy_mwh = 0.0;
    double energy_cost = 0.0;
    double peak_demand_kw = 0.0;
    double demand_cost = 0.0; ///< peak 30-min demand x demand price
    double fr_revenue = 0.0;
    double total = 0.0; ///< energy + demand - revenue
};

/// Energy cost over the price span: sum of price x mean power x interval hours.
double energy_cost(const TimeSeries& energy_price, const TimeSeries& power_kw);

/// Demand penalty over the span: the worst 30-min average above the limit,
/// priced at demand_price. Zero when every interval stays below the limit.
double demand_penalty(const TimeSeries& power_kw, double demand_limit_kw, double demand_price);

/// Peak 30-minute average power over the span.
double peak_demand_30min(const TimeSeries& power_kw);

/// Regulation revenue: sum of hourly capacity price x reserved capacity.
double regulation_revenue(const TimeSeries& regulation_price, const TimeSeries& capacity_kw);

} // namespace dcgridsim::market
