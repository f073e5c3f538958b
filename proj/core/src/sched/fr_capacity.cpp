#include "dcgridsim/sched/fr_capacity.hpp"

#include "dcgridsim/tracking/server_mgmt.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace dcgridsim::sched {

double baseline_frequency(double freq_min, const plant::AggregatorParams& p) {
    const double fm = std::clamp(freq_min, 0.0, p.freq_max);
    const double poly_lo = p.b1 * fm + p.b2 * fm * fm;
    const double poly_hi = p.b1 * p.freq_max + p.b2 * p.freq_max * p.freq_max;
    const double target = 0.5 * (poly_lo + poly_hi);
    // solve b2 f^2 + b1 f = target, positive root
    const double f = (-p.b1 + std::sqrt(p.b1 * p.b1 + 4.0 * p.b2 * target)) / (2.0 * p.b2);
    return std::clamp(f, fm, p.freq_max);
}

double fr_capacity_servers(double lambda_pred, int n_active, double freq_base,
                           const plant::AggregatorParams& p) {
    if (n_active <= 0 || lambda_pred <= 0.0) return 0.0;
    double freq_min;
    try {
        freq_min = tracking::min_frequency(lambda_pred, n_active, p, p.response_cap_s);
    } catch (const std::exception& e) {
        std::cerr << "fr_capacity_servers: QoS leaves no frequency headroom (" << e.what()
                  << "); bidding zero server capacity\n";
        return 0.0;
    }
    if (freq_base < freq_min - 1e-9 || freq_base > p.freq_max + 1e-9)
        throw std::invalid_argument("fr_capacity_servers: base frequency outside [f_min, f_max]");
    const double n = n_active;
    const double p_base = plant::aggregator_power(lambda_pred, freq_base, n, p);
    const double p_max = plant::aggregator_power(lambda_pred, p.freq_max, n, p);
    const double p_min = plant::aggregator_power(lambda_pred, freq_min, n, p);
    const double up = std::max(p_max - p_base, 0.0);
    const double down = std::max(p_base - p_min, 0.0);
    return std::min(up, down) / 1000.0;
}

double fr_capacity_chiller(double chiller_base_kw, double chiller_min_kw, double chiller_max_kw,
                           double cop) {
    if (chiller_base_kw < chiller_min_kw - 1e-9 || chiller_base_kw > chiller_max_kw + 1e-9)
        throw std::invalid_argument("fr_capacity_chiller: base setpoint outside chiller range");
    if (!(cop > 0.0)) throw std::invalid_argument("fr_capacity_chiller: non-positive COP");
    const double range =
        std::max(std::min(chiller_max_kw - chiller_base_kw, chiller_base_kw - chiller_min_kw), 0.0);
    return range / cop;
}

double fr_capacity_total(double servers_kw, double chiller_kw) {
    if (servers_kw < 0.0 || chiller_kw < 0.0)
        throw std::invalid_argument("fr_capacity_total: negative component capacity");
    return servers_kw + chiller_kw;
}

} // namespace dcgridsim::sched
