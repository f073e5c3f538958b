#pragma once

#include "dcgridsim/plant/aggregator.hpp"
#include "dcgridsim/plant/mode.hpp"

namespace dcgridsim::tracking {

/// Servers to activate for a predicted workload: ceil(beta*gamma*lambda/k),
/// clamped to the installed fleet. Held constant within the hour.
int active_servers(double lambda_pred, const plant::AggregatorParams& p);

/// Lowest aggregated frequency that still meets the response-time cap, found
/// by bisection on the utilization (response time is strictly increasing in
/// it). Throws when the cap is unattainable even at full frequency.
double min_frequency(double lambda, int n_active, const plant::AggregatorParams& p,
                     double response_cap_s);

/// P_ref = P_bas + r * C_reg.
double reference_power(double power_base_kw, double reg_signal, double capacity_kw);

struct CoolingSetpoints {
    double chiller_setpoint_kw; ///< u_c,set
    double charge_setpoint_kw;  ///< u_s,set, positive = charging
    double chiller_range_kw;    ///< delta u_c, symmetric modulation range
};

/// Open-loop cooling response to the regulation signal: the chiller setpoint
/// swings around its base by r * delta_u_c, and the surplus over the
/// predicted cooling load is routed to the tank.
CoolingSetpoints cooling_fr_setpoints(double chiller_base_kw, double reg_signal,
                                      const plant::CoolingLimits& lims, double cooling_pred_kw);

} // namespace dcgridsim::tracking
