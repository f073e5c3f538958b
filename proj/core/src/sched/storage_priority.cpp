#include "dcgridsim/sched/storage_priority.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace dcgridsim::sched {

namespace {

double charge_rate_for(double u_c_set, double cooling_kw, const plant::CoolingLimits& lims) {
    const double u_c_eff = u_c_set >= lims.chiller_min_kw
                               ? std::min(u_c_set, lims.chiller_max_kw)
                               : 0.0;
    return std::clamp(u_c_eff - cooling_kw, lims.charge_min_kw, lims.charge_max_kw);
}

// SoC after holding a constant chiller setpoint across the given hourly
// cooling loads, with the tank clamped to its physical range.
double end_soc(double soc0, double u_c_const, const std::vector<double>& cooling_kw,
               double capacity_kj, const plant::CoolingLimits& lims) {
    double soc = soc0;
    for (double q : cooling_kw) {
        double u_s = charge_rate_for(u_c_const, q, lims);
        const double headroom_kwh = (1.0 - soc) * capacity_kj / 3600.0;
        const double stored_kwh = soc * capacity_kj / 3600.0;
        if (u_s > 0.0) u_s = std::min(u_s, headroom_kwh);
        if (u_s < 0.0) u_s = -std::min(-u_s, stored_kwh);
        soc += u_s * 3600.0 / capacity_kj;
    }
    return soc;
}

} // namespace

std::vector<double> storage_priority_schedule(const Forecasts& f, const OnPeakWindow& onpeak,
                                              const plant::PlantState& state0,
                                              const plant::PlantParams& pp,
                                              const OptProblemConfig& cfg) {
    const auto plans = plan_window(f, pp.servers);
    const double capacity_kj = state0.tank.capacity_kj();
    const auto& lims = pp.limits;

    std::vector<double> u_c(f.hours, 0.0);
    double soc = plant::tank_soc(state0.tank);

    int h = 0;
    while (h < f.hours) {
        const int hour_of_day = static_cast<int>(((f.start_s + 3600LL * h) / 3600) % 24);
        if (onpeak.contains(hour_of_day)) {
            // remaining hours of this on-peak period inside the window
            std::vector<double> loads;
            int span = 0;
            for (int j = h; j < f.hours; ++j) {
                const int hod = static_cast<int>(((f.start_s + 3600LL * j) / 3600) % 24);
                if (!onpeak.contains(hod)) break;
                loads.push_back(plans[j].cooling_pred_kw);
                ++span;
            }
            double u_on;
            if (end_soc(soc, 0.0, loads, capacity_kj, lims) >= cfg.soc_min) {
                u_on = 0.0; // the tank alone carries the period
            } else if (end_soc(soc, lims.chiller_max_kw, loads, capacity_kj, lims) < cfg.soc_min) {
                // beyond tank + chiller: chiller-priority fallback
                std::cerr << "storage_priority: on-peak load exceeds tank+chiller capability; "
                             "falling back to chiller-priority\n";
                for (int j = 0; j < span; ++j) {
                    u_c[h + j] = std::min(loads[j], lims.chiller_max_kw);
                    double u_s = charge_rate_for(u_c[h + j], loads[j], lims);
                    soc += u_s * 3600.0 / capacity_kj;
                    soc = std::clamp(soc, 0.0, 1.0);
                }
                h += span;
                continue;
            } else {
                double lo = 0.0, hi = lims.chiller_max_kw;
                for (int it = 0; it < 48; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (end_soc(soc, mid, loads, capacity_kj, lims) < cfg.soc_min ? lo : hi) = mid;
                }
                u_on = hi; // just depleted, erring on the side of staying above the floor
            }
            for (int j = 0; j < span; ++j) {
                u_c[h + j] = u_on;
                double u_s = charge_rate_for(u_on, loads[j], lims);
                const double stored_kwh = soc * capacity_kj / 3600.0;
                if (u_s < 0.0) u_s = -std::min(-u_s, stored_kwh);
                soc = std::clamp(soc + u_s * 3600.0 / capacity_kj, 0.0, 1.0);
            }
            h += span;
            continue;
        }

        // Off-peak: energy the next on-peak period needs, from the forecast.
        double need_kwh = 0.0;
        bool in_next_peak = false;
        for (int j = h; j < f.hours; ++j) {
            const int hod = static_cast<int>(((f.start_s + 3600LL * j) / 3600) % 24);
            if (onpeak.contains(hod)) {
                in_next_peak = true;
                need_kwh += plans[j].cooling_pred_kw;
            } else if (in_next_peak) {
                break;
            }
        }
        const double target_soc =
            std::min(cfg.soc_max, cfg.soc_min + need_kwh * 3600.0 / capacity_kj);
        const double q = plans[h].cooling_pred_kw;
        if (soc < target_soc - 1e-6) {
            u_c[h] = lims.chiller_max_kw; // charge flat out
        } else if (q >= lims.chiller_min_kw) {
            u_c[h] = std::min(q, lims.chiller_max_kw); // meet the load, tank idle
        } else if (soc > cfg.soc_min + 0.01) {
            u_c[h] = 0.0; // trickle loads served from storage
        } else {
            u_c[h] = lims.chiller_min_kw;
        }
        double u_s = charge_rate_for(u_c[h], q, lims);
        const double headroom_kwh = (1.0 - soc) * capacity_kj / 3600.0;
        const double stored_kwh = soc * capacity_kj / 3600.0;
        if (u_s > 0.0) u_s = std::min(u_s, headroom_kwh);
        if (u_s < 0.0) u_s = -std::min(-u_s, stored_kwh);
        // stop charging once the target is crossed mid-hour
        if (u_s > 0.0) {
            const double to_target_kwh = std::max(target_soc - soc, 0.0) * capacity_kj / 3600.0;
            if (u_s > to_target_kwh) {
                // partial-hour charge: approximate with the load-tracking setpoint next hour
                u_s = to_target_kwh;
            }
        }
        soc = std::clamp(soc + u_s * 3600.0 / capacity_kj, 0.0, 1.0);
        ++h;
    }
    return u_c;
}

} // namespace dcgridsim::sched
