#pragma once

#include "dcgridsim/plant/aggregator.hpp"
#include "dcgridsim/plant/chiller.hpp"
#include "dcgridsim/plant/mode.hpp"
#include "dcgridsim/plant/tank.hpp"

namespace dcgridsim::plant {

struct RoomState {
    double temp_c = 25.0;
    double capacitance_kj_per_k = 594600.0; ///< nominal load moves the room 1 K per 5 min
    double temp_min_c = 22.0;
    double temp_max_c = 28.0;

    void validate() const;
};

/// Nameplate draws of the constant-speed auxiliaries; the supply fan scales
/// with the cube of the load fraction.
struct AuxParams {
    double pump_primary_kw = 7.0;
    double pump_secondary_kw = 22.5;
    double pump_condenser_kw = 30.0;
    double pump_transfer_kw = 4.0;
    double tower_fan_kw = 86.0;
    double supply_fan_kw = 210.0;
    double fan_design_load_kw = 1982.0;
};

/// PI loop driving the transfer-pump flow so the measured charging rate
/// tracks its setpoint. Default gains settle the rate within 60 s at the
/// 4-second tick against the nominal 7 K temperature spread.
struct FlowPiParams {
    double kp = 0.0123; ///< (kg/s) per kW of error
    double ki = 0.0055; ///< (kg/s) per kW·s
    double mdot_max_kgps = 52.6;
};

struct PlantParams {
    AggregatorParams servers;
    AuxParams aux;
    FlowPiParams flow_pi;
    CoolingLimits limits;
    double mode_delay_s = 300.0;
    /// supply water entering the tank bottom while charging
    double t_charge_inlet_c = 5.0;
    /// warm return entering the tank top while discharging
    double t_discharge_inlet_c = 12.0;
    bool cop_derate_enabled = false;
    double cop_derate_per_k = 0.015;
    double wetbulb_design_c = 25.0;

    double cop_scale(double wetbulb_c) const;
};

/// Per-step actuator set coming out of the controllers.
struct ControlCommand {
    double chiller_setpoint_kw = 0.0; ///< u_c,set
    double charge_setpoint_kw = 0.0;  ///< u_s,set, positive = charge the tank
    int n_active_servers = 0;
    double freq = 1.0; ///< aggregated CPU frequency
};

/// Full dynamic state of the plant.
struct PlantState {
    TankState tank;
    ChillerState chiller;
    RoomState room;
    ModeStaging staging;
    double mdot_kgps = 0.0;      ///< current transfer-pump flow, signed
    double flow_integral = 0.0;  ///< PI integrator of the charge-rate error
    long unmatched_mode_steps = 0; ///< steps whose setpoints matched no staging predicate
};

/// Instantaneous measurements produced by one step.
struct PlantOutputs {
    double power_total_kw = 0.0;  ///< P_dc
    double power_servers_kw = 0.0;
    double power_chiller_kw = 0.0;
    double power_aux_kw = 0.0;
    double cooling_load_kw = 0.0;   ///< heat rejected by the servers
    double charge_rate_kw = 0.0;    ///< realized u_s (positive = charging)
    double soc = 0.0;
};

/// Advance the plant one step (dt in (0, 60] s): servers -> cooling load ->
/// mode staging -> chiller -> tank flow PI -> tank advection -> room balance.
PlantOutputs plant_step(PlantState& state, const ControlCommand& cmd, double lambda,
                        double wetbulb_c, double dt_s, const PlantParams& p);

/// Advance an arbitrary span by chaining plant_step at <= 60 s increments.
PlantOutputs plant_advance(PlantState& state, const ControlCommand& cmd, double lambda,
                           double wetbulb_c, double span_s, const PlantParams& p);

} // namespace dcgridsim::plant
