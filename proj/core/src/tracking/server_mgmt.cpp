#include "dcgridsim/tracking/server_mgmt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dcgridsim::tracking {

int active_servers(double lambda_pred, const plant::AggregatorParams& p) {
    if (!(p.service_rate_k > 0.0)) throw std::invalid_argument("active_servers: k must be positive");
    if (lambda_pred < 0.0) throw std::invalid_argument("active_servers: negative workload");
    const double raw = p.fr_flexibility * p.design_redundancy * lambda_pred / p.service_rate_k;
    // guard the ceiling against binary representation of the factor product
    // (1.1*1.5*9000 evaluates to 14850.000000000002)
    const double guarded = raw - 1e-9 * std::max(1.0, raw);
    int n = static_cast<int>(std::ceil(guarded));
    n = std::clamp(n, 0, p.n_servers_total);
    if (n == 0 && lambda_pred > 0.0)
        throw std::runtime_error("active_servers: no servers available for workload " +
                                 std::to_string(lambda_pred) + " requests/s");
    return n;
}

double min_frequency(double lambda, int n_active, const plant::AggregatorParams& p,
                     double response_cap_s) {
    if (n_active < 1) throw std::invalid_argument("min_frequency: need at least one active server");
    if (!(response_cap_s > 0.0)) throw std::invalid_argument("min_frequency: non-positive cap");
    const double nk = p.service_rate_k * static_cast<double>(n_active);

    if (lambda <= 0.0) {
        // no load: only the service time constrains the frequency
        const double f = 1.0 / (p.service_rate_k * response_cap_s);
        if (f > p.freq_max)
            throw std::runtime_error("min_frequency: response cap unattainable at zero load");
        return std::max(f, 1e-12);
    }

    constexpr double kEps = 1e-9;
    const double rho_at_fmax = lambda / (nk * p.freq_max);
    if (rho_at_fmax >= 1.0)
        throw std::runtime_error("min_frequency: workload unstable even at full frequency");
    double lo = rho_at_fmax;
    double hi = 1.0 - kEps;
    const double t_lo = plant::response_time_at_utilization(lo, lambda, n_active, p);
    if (t_lo > response_cap_s)
        throw std::runtime_error("min_frequency: response cap " + std::to_string(response_cap_s) +
                                 " s unattainable at any admissible frequency (best " +
                                 std::to_string(t_lo) + " s)");
    double rho_star;
    if (plant::response_time_at_utilization(hi, lambda, n_active, p) < response_cap_s) {
        rho_star = hi; // cap is slack everywhere; run at the stability edge
    } else {
        // invariant: t_r(lo) <= cap < t_r(hi)
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double t_mid = plant::response_time_at_utilization(mid, lambda, n_active, p);
            if (std::abs(t_mid - response_cap_s) <= 1e-9 * response_cap_s) {
                lo = mid;
                break;
            }
            (t_mid <= response_cap_s ? lo : hi) = mid;
            if (hi - lo <= 1e-15) break;
        }
        rho_star = lo; // conservative side: response time <= cap
    }
    const double f = lambda / (nk * rho_star);
    return std::min(f, p.freq_max);
}

double reference_power(double power_base_kw, double reg_signal, double capacity_kw) {
    if (capacity_kw < 0.0) throw std::invalid_argument("reference_power: negative capacity");
    return power_base_kw + reg_signal * capacity_kw;
}

CoolingSetpoints cooling_fr_setpoints(double chiller_base_kw, double reg_signal,
                                      const plant::CoolingLimits& lims, double cooling_pred_kw) {
    if (chiller_base_kw < lims.chiller_min_kw - 1e-9 || chiller_base_kw > lims.chiller_max_kw + 1e-9)
        throw std::invalid_argument("cooling_fr_setpoints: base setpoint outside chiller range");
    CoolingSetpoints out{};
    out.chiller_range_kw = std::min(lims.chiller_max_kw - chiller_base_kw,
                                    chiller_base_kw - lims.chiller_min_kw);
    out.chiller_range_kw = std::max(out.chiller_range_kw, 0.0);
    out.chiller_setpoint_kw = chiller_base_kw + reg_signal * out.chiller_range_kw;
    // positive = charging; the chiller surplus over the predicted load is
    // what the tank absorbs
    out.charge_setpoint_kw = std::clamp(out.chiller_setpoint_kw - cooling_pred_kw,
                                        lims.charge_min_kw, lims.charge_max_kw);
    return out;
}

} // namespace dcgridsim::tracking
