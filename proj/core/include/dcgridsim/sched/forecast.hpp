#pragma once

#include "dcgridsim/plant/plant.hpp"
#include "dcgridsim/timeseries.hpp"

#include <vector>

namespace dcgridsim::sched {

/// Predicted inputs over one scheduling window.
struct Forecasts {
    std::int64_t start_s = 0; ///< first hour boundary of the window
    int hours = 0;
    std::vector<double> energy_price;     ///< $/kWh per hour
    std::vector<double> regulation_price; ///< $/kW/h per hour
    std::vector<double> lambda;           ///< mean workload per hour, requests/s
    std::vector<double> wetbulb_c;        ///< mean wet-bulb per hour
    std::vector<double> reg_hist;         ///< historical RegD at 5-min bins, hours*12 values
};

/// Server-side quantities fixed per hour by the operating policy: activation
/// count, QoS frequency floor, the baseline frequency, the implied cooling
/// load, and the power slope dP_agg/df used for PID gain scheduling.
struct HourServerPlan {
    int n_active = 0;
    double freq_min = 0.0;
    double freq_base = 1.0;
    double cooling_pred_kw = 0.0; ///< q~, predicted cooling load at freq_base
    double power_base_kw = 0.0;   ///< server power at freq_base
    double power_slope_kw = 0.0;  ///< dP_agg/df at freq_base, kW per unit frequency
    double fr_capacity_kw = 0.0;  ///< symmetric server regulation capacity
};

HourServerPlan plan_servers_for_hour(double lambda_mean, const plant::AggregatorParams& p);

/// Build forecasts for [start, start + hours*3600) from the input series.
/// reg_hist holds the previous day's realized signal aligned by hour; hours
/// belonging to the first simulated day fall back to the seed trace (or the
/// actual signal when no seed trace is supplied).
Forecasts build_forecasts(std::int64_t start_s, int hours, const TimeSeries& energy_price,
                          const TimeSeries& regulation_price, const TimeSeries& workload,
                          const TimeSeries& wetbulb, const TimeSeries& reg_signal,
                          const TimeSeries* reg_seed);

} // namespace dcgridsim::sched
