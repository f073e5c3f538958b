#include "dcgridsim/plant/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcgridsim::plant {

void RoomState::validate() const {
    if (!(capacitance_kj_per_k > 0.0)) throw std::invalid_argument("room: non-positive capacitance");
    if (!(temp_min_c < temp_max_c)) throw std::invalid_argument("room: inverted temperature band");
}

double PlantParams::cop_scale(double wetbulb_c) const {
    if (!cop_derate_enabled) return 1.0;
    const double excess = std::max(wetbulb_c - wetbulb_design_c, 0.0);
    return std::max(1.0 - cop_derate_per_k * excess, 0.1);
}

namespace {

// Route the commanded setpoints through the active mode: each mode only
// admits its own flow direction, and M2 runs without the chiller.
void route_actuation(OperatingMode mode, const ControlCommand& cmd, const CoolingLimits& lims,
                     double& u_c_eff, double& u_s_eff) {
    const double u_c = std::clamp(cmd.chiller_setpoint_kw, 0.0, lims.chiller_max_kw);
    const double u_s = std::clamp(cmd.charge_setpoint_kw, lims.charge_min_kw, lims.charge_max_kw);
    switch (mode) {
    case OperatingMode::ChargeWhileMeetingLoad:
        u_c_eff = u_c;
        u_s_eff = std::max(u_s, 0.0);
        break;
    case OperatingMode::StorageOnly:
        u_c_eff = 0.0;
        u_s_eff = std::min(u_s, 0.0);
        break;
    case OperatingMode::StorageAndChiller:
        u_c_eff = u_c;
        u_s_eff = std::min(u_s, 0.0);
        break;
    case OperatingMode::ChillerOnly:
    default:
        u_c_eff = u_c;
        u_s_eff = 0.0;
        break;
    }
}

} // namespace

PlantOutputs plant_step(PlantState& state, const ControlCommand& cmd, double lambda,
                        double wetbulb_c, double dt_s, const PlantParams& p) {
    if (!(dt_s > 0.0) || dt_s > 60.0)
        throw std::invalid_argument("plant_step: dt must lie in (0, 60] s");

    PlantOutputs out{};
    out.power_servers_kw = aggregator_power(lambda, cmd.freq, cmd.n_active_servers, p.servers) / 1000.0;
    out.cooling_load_kw = cooling_load(out.power_servers_kw * 1000.0);

    const auto staged = mode_transition(state.staging, cmd.chiller_setpoint_kw,
                                        cmd.charge_setpoint_kw, p.limits, dt_s);
    state.staging = staged.staging;
    if (staged.unmatched_setpoints) ++state.unmatched_mode_steps;

    double u_c_eff = 0.0, u_s_eff = 0.0;
    route_actuation(state.staging.mode, cmd, p.limits, u_c_eff, u_s_eff);

    const auto chilled = chiller_step(state.chiller, u_c_eff, dt_s, p.cop_scale(wetbulb_c));
    state.chiller = chilled.state;
    out.power_chiller_kw = chilled.power_kw;

    // Transfer-pump PI: track the charging-rate setpoint with the flow,
    // sub-stepped together with the tank advection for stability.
    const double cp = state.tank.cp_kj_per_kg_k;
    double charge_energy_kj = 0.0;
    if (state.staging.mode == OperatingMode::ChillerOnly) {
        state.mdot_kgps = 0.0;
        state.flow_integral = 0.0;
    } else {
        const double mdot_cap = p.flow_pi.mdot_max_kgps;
        const double cfl_dt = state.tank.mass_per_volume_kg / mdot_cap;
        // 6 s keeps the PI recurrence stable at the default gains
        const int n_sub = std::max(1, static_cast<int>(std::ceil(dt_s / std::min(6.0, cfl_dt))));
        const double dt_sub = dt_s / n_sub;
        const bool charging_mode = state.staging.mode == OperatingMode::ChargeWhileMeetingLoad;
        const double mdot_lo = charging_mode ? 0.0 : -mdot_cap;
        const double mdot_hi = charging_mode ? mdot_cap : 0.0;
        for (int i = 0; i < n_sub; ++i) {
            const auto b = tank_boundary_temps(state.tank, state.mdot_kgps, p.t_charge_inlet_c,
                                               p.t_discharge_inlet_c);
            const double u_s_meas = tank_charge_rate(state.mdot_kgps, b.t_top_c, b.t_bottom_c, cp);
            const double err = u_s_eff - u_s_meas;
            const double integ = state.flow_integral + err * dt_sub;
            double mdot = p.flow_pi.kp * err + p.flow_pi.ki * integ;
            const bool saturated = mdot <= mdot_lo || mdot >= mdot_hi;
            if (!saturated || (mdot >= mdot_hi && err < 0.0) || (mdot <= mdot_lo && err > 0.0))
                state.flow_integral = integ; // conditional integration anti-windup
            mdot = std::clamp(mdot, mdot_lo, mdot_hi);
            state.mdot_kgps = mdot;
            // boundary flux with pre-step temps, matching the explicit scheme
            const auto b2 = tank_boundary_temps(state.tank, mdot, p.t_charge_inlet_c,
                                                p.t_discharge_inlet_c);
            const double u_s_now = tank_charge_rate(mdot, b2.t_top_c, b2.t_bottom_c, cp);
            charge_energy_kj += u_s_now * dt_sub;
            if (mdot != 0.0) {
                const double t_inlet = mdot > 0.0 ? p.t_charge_inlet_c : p.t_discharge_inlet_c;
                state.tank = tank_step(state.tank, mdot, t_inlet, dt_sub);
            }
        }
    }
    out.charge_rate_kw = charge_energy_kj / dt_s;
    out.soc = tank_soc(state.tank);

    // Room balance: servers heat it, the loop delivers chiller capacity net
    // of what flows into (or out of) the tank.
    const double q_delivered_kw = state.chiller.capacity_delivered_kw - out.charge_rate_kw;
    state.room.temp_c += dt_s * (out.cooling_load_kw - q_delivered_kw) / state.room.capacitance_kj_per_k;

    // Auxiliaries.
    double aux = p.aux.pump_secondary_kw; // chilled-water loop always circulates
    const bool chiller_running = state.staging.mode != OperatingMode::StorageOnly &&
                                 state.chiller.capacity_delivered_kw > 1.0;
    if (chiller_running)
        aux += p.aux.pump_primary_kw + p.aux.pump_condenser_kw + p.aux.tower_fan_kw;
    if (std::abs(state.mdot_kgps) > 1e-6) aux += p.aux.pump_transfer_kw;
    const double load_frac = out.cooling_load_kw / p.aux.fan_design_load_kw;
    aux += p.aux.supply_fan_kw * load_frac * load_frac * load_frac;
    out.power_aux_kw = aux;

    out.power_total_kw = out.power_servers_kw + out.power_chiller_kw + out.power_aux_kw;
    return out;
}

PlantOutputs plant_advance(PlantState& state, const ControlCommand& cmd, double lambda,
                           double wetbulb_c, double span_s, const PlantParams& p) {
    if (!(span_s > 0.0)) throw std::invalid_argument("plant_advance: span must be positive");
    const int n = std::max(1, static_cast<int>(std::ceil(span_s / 60.0)));
    const double dt = span_s / n;
    PlantOutputs acc{};
    for (int i = 0; i < n; ++i) {
        const auto o = plant_step(state, cmd, lambda, wetbulb_c, dt, p);
        acc.power_total_kw += o.power_total_kw * dt;
        acc.power_servers_kw += o.power_servers_kw * dt;
        acc.power_chiller_kw += o.power_chiller_kw * dt;
        acc.power_aux_kw += o.power_aux_kw * dt;
        acc.cooling_load_kw += o.cooling_load_kw * dt;
        acc.charge_rate_kw += o.charge_rate_kw * dt;
        acc.soc = o.soc;
    }
    acc.power_total_kw /= span_s;
    acc.power_servers_kw /= span_s;
    acc.power_chiller_kw /= span_s;
    acc.power_aux_kw /= span_s;
    acc.cooling_load_kw /= span_s;
    acc.charge_rate_kw /= span_s;
    return acc;
}

} // namespace dcgridsim::plant
