#include "dcgridsim/tracking/controller.hpp"

#include <algorithm>
#include <stdexcept>

namespace dcgridsim::tracking {

TrackingController::TrackingController(const plant::AggregatorParams& servers,
                                       const plant::CoolingLimits& limits, const PidGains& gains)
    : servers_(servers), limits_(limits), configured_(gains) {
    pid_.kd = gains.kd;
}

void TrackingController::begin_hour(const TrackingInputs& in) {
    if (in.fr_capacity_kw < 0.0)
        throw std::invalid_argument("tracking: negative capacity bid");
    hour_ = in;
    n_active_ = active_servers(in.lambda_pred, servers_);
    if (n_active_ > 0) {
        pid_.out_min = min_frequency(in.lambda_pred, n_active_, servers_, servers_.response_cap_s);
    } else {
        pid_.out_min = servers_.freq_max;
    }
    pid_.out_max = servers_.freq_max;

    if (configured_.kp > 0.0) {
        pid_.kp = configured_.kp;
        pid_.ki = configured_.ki;
    } else {
        // schedule the loop gain from the hourly power slope dP_agg/df
        const double f_mid = 0.5 * (pid_.out_min + pid_.out_max);
        const double slope_kw =
            std::max(in.lambda_pred * (servers_.b1 + 2.0 * servers_.b2 * f_mid) / 1000.0, 1.0);
        pid_.kp = 0.6 / slope_kw;
        pid_.ki = 0.0625 / slope_kw;
    }
    pid_.kd = configured_.kd;
    hour_ready_ = true;
}

plant::ControlCommand TrackingController::step(double reg_signal, double power_meas_kw,
                                               double dt_s) {
    if (!hour_ready_) throw std::logic_error("tracking: step before begin_hour");
    if (reg_signal < -1.0 || reg_signal > 1.0)
        throw std::invalid_argument("tracking: regulation signal outside [-1, 1]");
    // no bid means no signal to follow
    const double r = hour_.fr_capacity_kw > 0.0 ? reg_signal : 0.0;
    power_ref_kw_ = reference_power(hour_.power_base_kw, r, hour_.fr_capacity_kw);

    const auto pid_out = pid_step(power_ref_kw_, power_meas_kw, pid_, dt_s);
    pid_ = pid_out.state;

    const auto cooling =
        cooling_fr_setpoints(hour_.chiller_base_kw, r, limits_, hour_.cooling_pred_kw);

    plant::ControlCommand cmd;
    cmd.freq = pid_out.freq;
    cmd.n_active_servers = n_active_;
    cmd.chiller_setpoint_kw = cooling.chiller_setpoint_kw;
    cmd.charge_setpoint_kw = cooling.charge_setpoint_kw;
    return cmd;
}

} // namespace dcgridsim::tracking
