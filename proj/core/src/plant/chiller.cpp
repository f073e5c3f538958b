#include "dcgridsim/plant/chiller.hpp"

#include <cmath>
#include <stdexcept>

namespace dcgridsim::plant {

void ChillerState::validate() const {
    if (!(capacity_nominal_kw > 0.0)) throw std::invalid_argument("chiller: non-positive capacity");
    if (capacity_delivered_kw < 0.0 || capacity_delivered_kw > capacity_nominal_kw)
        throw std::invalid_argument("chiller: delivered capacity outside [0, nominal]");
    if (!(setpoint_min_kw < setpoint_max_kw) || setpoint_max_kw > capacity_nominal_kw)
        throw std::invalid_argument("chiller: setpoint bounds inconsistent with capacity");
    if (!(cop > 0.0)) throw std::invalid_argument("chiller: non-positive COP");
    if (!(tau_s > 0.0)) throw std::invalid_argument("chiller: non-positive time constant");
}

ChillerOutput chiller_step(const ChillerState& s, double setpoint_kw, double dt_s,
                           double cop_scale) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("chiller_step: dt must be positive");
    double target = setpoint_kw;
    if (target < s.setpoint_min_kw) target = 0.0; // below minimum turndown means off
    if (target > s.setpoint_max_kw) target = s.setpoint_max_kw;

    ChillerOutput out{s, 0.0};
    const double decay = std::exp(-dt_s / s.tau_s);
    out.state.capacity_delivered_kw = target + (s.capacity_delivered_kw - target) * decay;
    const double cop_eff = s.cop * cop_scale;
    if (!(cop_eff > 0.0)) throw std::invalid_argument("chiller_step: derated COP must stay positive");
    out.power_kw = out.state.capacity_delivered_kw / cop_eff;
    return out;
}

} // namespace dcgridsim::plant
