#pragma once

#include <vector>

namespace dcgridsim::plant {

/// Stratified chilled-water tank as a stack of finite volumes.
/// temps[0] is the top (warm end), temps.back() the bottom (cold end).
struct TankState {
    std::vector<double> temps_c;
    double mass_per_volume_kg = 0.0;
    double cp_kj_per_kg_k = 4.186;
    double t_top_nominal_c = 12.0;   ///< nominal return temperature at the top
    double t_bottom_nominal_c = 5.0; ///< nominal supply temperature at the bottom

    int n_volumes() const { return static_cast<int>(temps_c.size()); }
    double total_mass_kg() const { return mass_per_volume_kg * temps_c.size(); }
    /// Nominal thermal capacity in kJ.
    double capacity_kj() const {
        return total_mass_kg() * cp_kj_per_kg_k * (t_top_nominal_c - t_bottom_nominal_c);
    }
    void validate() const;
};

/// Uniform-temperature tank; soc = 1 fills it with nominal supply water.
TankState make_tank(int n_volumes, double capacity_kj, double cp, double t_top_nominal_c,
                    double t_bottom_nominal_c, double initial_soc);

/// Measured charging rate in kW. Positive flow at the bottom = charging.
double tank_charge_rate(double mdot_bottom_kgps, double t_top_c, double t_bottom_c, double cp);

/// Temperatures of the water crossing the tank boundaries for the current
/// flow direction: charging takes supply water in at the bottom and pushes
/// tank water out at the top; discharging the reverse.
struct TankBoundary {
    double t_top_c;    ///< water flowing in (discharge) or out (charge) at the top
    double t_bottom_c; ///< water flowing in (charge) or out (discharge) at the bottom
};
TankBoundary tank_boundary_temps(const TankState& s, double mdot_bottom_kgps,
                                 double t_inlet_charge_c, double t_inlet_discharge_c);

/// One upwind plug-flow advection step for an adiabatic shell.
/// Requires |mdot|*dt <= mass_per_volume; callers integrate longer spans by
/// sub-stepping. mdot > 0 charges (cold in at the bottom, flow moves upward).
TankState tank_step(const TankState& s, double mdot_bottom_kgps, double t_inlet_c, double dt_s);

/// State of charge from the mean tank temperature, clamped to [0, 1].
double tank_soc(const TankState& s);

} // namespace dcgridsim::plant
