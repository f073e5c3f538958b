#pragma once

#include "dcgridsim/sched/mpc.hpp"

namespace dcgridsim::sched {

struct OnPeakWindow {
    int start_hour = 11; ///< local hour of day, inclusive
    int end_hour = 19;   ///< exclusive
    bool contains(int hour_of_day) const {
        return hour_of_day >= start_hour && hour_of_day < end_hour;
    }
};

/// Storage-priority rule evaluated over a window: off-peak the chiller runs
/// flat out until the tank is full or holds the next on-peak's cooling
/// energy; on-peak it runs at the constant capacity that just depletes the
/// tank by the end of the period (found by bisection against the predictive
/// model). Falls back to chiller-priority when the load exceeds what tank
/// plus chiller can cover.
std::vector<double> storage_priority_schedule(const Forecasts& f, const OnPeakWindow& onpeak,
                                              const plant::PlantState& state0,
                                              const plant::PlantParams& pp,
                                              const OptProblemConfig& cfg);

} // namespace dcgridsim::sched
