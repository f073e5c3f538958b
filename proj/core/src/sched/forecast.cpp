#include "dcgridsim/sched/forecast.hpp"

#include "dcgridsim/sched/fr_capacity.hpp"
#include "dcgridsim/tracking/server_mgmt.hpp"

#include <stdexcept>

namespace dcgridsim::sched {

HourServerPlan plan_servers_for_hour(double lambda_mean, const plant::AggregatorParams& p) {
    HourServerPlan h{};
    h.n_active = tracking::active_servers(lambda_mean, p);
    if (h.n_active == 0) {
        h.freq_min = h.freq_base = p.freq_max;
        h.power_base_kw = plant::aggregator_power(lambda_mean, p.freq_max, 0, p) / 1000.0;
        h.cooling_pred_kw = h.power_base_kw;
        return h;
    }
    h.freq_min = tracking::min_frequency(lambda_mean, h.n_active, p, p.response_cap_s);
    h.freq_base = baseline_frequency(h.freq_min, p);
    h.power_base_kw =
        plant::aggregator_power(lambda_mean, h.freq_base, h.n_active, p) / 1000.0;
    h.cooling_pred_kw = h.power_base_kw;
    h.power_slope_kw = lambda_mean * (p.b1 + 2.0 * p.b2 * h.freq_base) / 1000.0;
    h.fr_capacity_kw = fr_capacity_servers(lambda_mean, h.n_active, h.freq_base, p);
    return h;
}

Forecasts build_forecasts(std::int64_t start_s, int hours, const TimeSeries& energy_price,
                          const TimeSeries& regulation_price, const TimeSeries& workload,
                          const TimeSeries& wetbulb, const TimeSeries& reg_signal,
                          const TimeSeries* reg_seed) {
    if (hours < 1) throw std::invalid_argument("build_forecasts: need at least one hour");
    Forecasts f;
    f.start_s = start_s;
    f.hours = hours;
    f.energy_price.reserve(hours);
    f.regulation_price.reserve(hours);
    f.lambda.reserve(hours);
    f.wetbulb_c.reserve(hours);
    f.reg_hist.reserve(static_cast<std::size_t>(hours) * 12);
    for (int h = 0; h < hours; ++h) {
        const std::int64_t t0 = start_s + 3600LL * h;
        const std::int64_t t1 = t0 + 3600;
        f.energy_price.push_back(energy_price.mean_over(t0, t1));
        f.regulation_price.push_back(regulation_price.mean_over(t0, t1));
        f.lambda.push_back(workload.mean_over(t0, t1));
        f.wetbulb_c.push_back(wetbulb.mean_over(t0, t1));
        // historical-signal prediction: previous day when available
        std::int64_t hist0 = t0 - 86400;
        const TimeSeries* src = &reg_signal;
        if (hist0 < reg_signal.start_s()) {
            if (reg_seed != nullptr && reg_seed->covers(t0, t1)) {
                src = reg_seed;
                hist0 = t0;
            } else {
                hist0 = t0; // fall back to the same-day trace
            }
        }
        for (int b = 0; b < 12; ++b) {
            const std::int64_t b0 = hist0 + 300LL * b;
            if (src->covers(b0, b0 + 300))
                f.reg_hist.push_back(src->mean_over(b0, b0 + 300));
            else
                f.reg_hist.push_back(0.0);
        }
    }
    return f;
}

} // namespace dcgridsim::sched
