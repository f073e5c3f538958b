#include "dcgridsim/tracking/pid.hpp"

#include <algorithm>
#include <stdexcept>

namespace dcgridsim::tracking {

PidOutput pid_step(double power_ref_kw, double power_meas_kw, const PidState& s, double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("pid_step: dt must be positive");
    PidOutput out{0.0, s};
    const double err = power_ref_kw - power_meas_kw;
    const double integral_cand = s.integral + err * dt_s;
    const double deriv = s.has_prev_error ? (err - s.prev_error) / dt_s : 0.0;
    const double raw = s.kp * err + s.ki * integral_cand + s.kd * deriv;
    out.freq = std::clamp(raw, s.out_min, s.out_max);
    // conditional integration: keep the integral only when it does not push
    // further into saturation
    const bool push_high = raw > s.out_max && err > 0.0;
    const bool push_low = raw < s.out_min && err < 0.0;
    if (!push_high && !push_low) out.state.integral = integral_cand;
    out.state.prev_error = err;
    out.state.has_prev_error = true;
    return out;
}

} // namespace dcgridsim::tracking
