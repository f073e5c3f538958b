#pragma once

#include "dcgridsim/plant/aggregator.hpp"

namespace dcgridsim::sched {

/// Frequency at which the aggregator's power sits midway between its
/// feasible extremes [P(f_min), P(f_max)]. This is where the symmetric
/// server regulation capacity is largest, and it is the operating policy
/// used whenever the servers are not chasing a signal.
double baseline_frequency(double freq_min, const plant::AggregatorParams& p);

/// Symmetric server regulation capacity in kW at a fixed operating point:
/// min(max(P(f_max)-P(f_bas),0), max(P(f_bas)-P(f_min),0)).
/// Returns 0 (with a stderr note) when the QoS bound leaves no headroom.
double fr_capacity_servers(double lambda_pred, int n_active, double freq_base,
                           const plant::AggregatorParams& p);

/// Chiller regulation capacity in kW electric:
/// min(u_c_max - base, base - u_c_min) / COP.
double fr_capacity_chiller(double chiller_base_kw, double chiller_min_kw, double chiller_max_kw,
                           double cop);

/// Total bid = servers + chiller.
double fr_capacity_total(double servers_kw, double chiller_kw);

} // namespace dcgridsim::sched
