#pragma once

namespace dcgridsim::plant {

struct ChillerState {
    double capacity_delivered_kw = 0.0;
    double capacity_nominal_kw = 1982.0;
    double cop = 5.8;
    double tau_s = 300.0;          ///< first-order thermal time constant
    double setpoint_min_kw = 99.1; ///< lowest capacity the chiller can hold while on
    double setpoint_max_kw = 1982.0;

    void validate() const;
};

struct ChillerOutput {
    ChillerState state;
    double power_kw; ///< electric draw = delivered capacity / effective COP
};

/// First-order response of delivered capacity toward the setpoint.
/// Setpoints below setpoint_min are treated as "off" (target 0); above
/// setpoint_max they clamp. cop_scale derates the design COP (1 = none).
ChillerOutput chiller_step(const ChillerState& s, double setpoint_kw, double dt_s,
                           double cop_scale = 1.0);

} // namespace dcgridsim::plant
