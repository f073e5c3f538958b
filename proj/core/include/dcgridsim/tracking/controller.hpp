#pragma once

#include "dcgridsim/plant/plant.hpp"
#include "dcgridsim/tracking/pid.hpp"
#include "dcgridsim/tracking/server_mgmt.hpp"

namespace dcgridsim::tracking {

/// Hourly quantities handed down by the schedulers.
struct TrackingInputs {
    double power_base_kw = 0.0;    ///< P_bas for this hour
    double fr_capacity_kw = 0.0;   ///< C_reg bid
    double chiller_base_kw = 0.0;  ///< u_c,set,bas
    double lambda_pred = 0.0;      ///< mean workload expected this hour
    double cooling_pred_kw = 0.0;  ///< q~, predicted cooling load
};

struct PidGains {
    double kp = 0.0; ///< 0 selects gain scheduling from the hourly power slope
    double ki = 0.0;
    double kd = 0.0;
};

/// Real-time signal-tracking controller: server power management closes the
/// loop on total power through the aggregated frequency, cooling power
/// management follows the signal open loop through the chiller setpoint.
class TrackingController {
public:
    TrackingController(const plant::AggregatorParams& servers, const plant::CoolingLimits& limits,
                       const PidGains& gains);

    /// Refresh the hourly quantities: activation count, frequency floor,
    /// PID bounds and (when auto) gains.
    void begin_hour(const TrackingInputs& in);

    /// One 4-second tick: returns the actuator command for this signal
    /// sample and the latest power measurement.
    plant::ControlCommand step(double reg_signal, double power_meas_kw, double dt_s);

    double power_ref_kw() const { return power_ref_kw_; }
    double freq_min() const { return pid_.out_min; }
    int n_active() const { return n_active_; }
    const PidState& pid() const { return pid_; }

private:
    plant::AggregatorParams servers_;
    plant::CoolingLimits limits_;
    PidGains configured_;
    PidState pid_;
    TrackingInputs hour_{};
    int n_active_ = 0;
    double power_ref_kw_ = 0.0;
    bool hour_ready_ = false;
};

} // namespace dcgridsim::tracking
