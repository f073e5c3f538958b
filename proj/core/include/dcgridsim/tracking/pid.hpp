#pragma once

namespace dcgridsim::tracking {

/// PID regulating the aggregated CPU frequency toward a power reference.
/// Output bounds are the feasible frequency window; the integrator freezes
/// while the output is saturated.
struct PidState {
    double kp = 0.0; ///< 1/kW
    double ki = 0.0; ///< 1/(kW*s)
    double kd = 0.0; ///< s/kW
    double integral = 0.0;
    double prev_error = 0.0;
    bool has_prev_error = false;
    double out_min = 0.0; ///< f_min for the current hour
    double out_max = 1.0; ///< f_max
};

struct PidOutput {
    double freq;
    PidState state;
};

/// One controller update: error = reference - measured power.
PidOutput pid_step(double power_ref_kw, double power_meas_kw, const PidState& s, double dt_s);

} // namespace dcgridsim::tracking
