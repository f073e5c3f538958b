#include "dcgridsim/plant/tank.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dcgridsim::plant {

void TankState::validate() const {
    if (n_volumes() < 2) throw std::invalid_argument("tank: need at least 2 volumes");
    if (!(mass_per_volume_kg > 0.0)) throw std::invalid_argument("tank: non-positive volume mass");
    if (!(cp_kj_per_kg_k > 0.0)) throw std::invalid_argument("tank: non-positive cp");
    if (!(t_top_nominal_c > t_bottom_nominal_c))
        throw std::invalid_argument("tank: nominal top temperature must exceed bottom");
    for (double t : temps_c)
        if (!std::isfinite(t)) throw std::invalid_argument("tank: non-finite temperature");
}

TankState make_tank(int n_volumes, double capacity_kj, double cp, double t_top_nominal_c,
                    double t_bottom_nominal_c, double initial_soc) {
    TankState s;
    s.cp_kj_per_kg_k = cp;
    s.t_top_nominal_c = t_top_nominal_c;
    s.t_bottom_nominal_c = t_bottom_nominal_c;
    const double dt_nom = t_top_nominal_c - t_bottom_nominal_c;
    if (!(dt_nom > 0.0)) throw std::invalid_argument("make_tank: nominal temperatures inverted");
    const double total_mass = capacity_kj / (cp * dt_nom);
    s.mass_per_volume_kg = total_mass / n_volumes;
    const double t_init = t_top_nominal_c - initial_soc * dt_nom;
    s.temps_c.assign(static_cast<std::size_t>(n_volumes), t_init);
    s.validate();
    return s;
}

double tank_charge_rate(double mdot_bottom_kgps, double t_top_c, double t_bottom_c, double cp) {
    if (t_top_c < t_bottom_c)
        throw std::invalid_argument("tank_charge_rate: top temperature below bottom");
    return mdot_bottom_kgps * cp * (t_top_c - t_bottom_c);
}

TankBoundary tank_boundary_temps(const TankState& s, double mdot_bottom_kgps,
                                 double t_inlet_charge_c, double t_inlet_discharge_c) {
    if (mdot_bottom_kgps >= 0.0)
        return {s.temps_c.front(), t_inlet_charge_c};
    return {t_inlet_discharge_c, s.temps_c.back()};
}

TankState tank_step(const TankState& s, double mdot_bottom_kgps, double t_inlet_c, double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("tank_step: dt must be positive");
    const double moved = std::abs(mdot_bottom_kgps) * dt_s;
    if (moved > s.mass_per_volume_kg * (1.0 + 1e-12))
        throw std::runtime_error(
            "tank_step: |mdot|*dt = " + std::to_string(moved) + " kg exceeds the volume mass " +
            std::to_string(s.mass_per_volume_kg) + " kg; sub-step the interval");

    TankState out = s;
    if (mdot_bottom_kgps == 0.0) return out;

    const double c = moved / s.mass_per_volume_kg; // Courant number, <= 1
    const int n = s.n_volumes();
    if (mdot_bottom_kgps > 0.0) {
        // charging: inflow at the bottom, water advances toward the top
        for (int i = 0; i < n - 1; ++i)
            out.temps_c[i] += c * (s.temps_c[i + 1] - s.temps_c[i]);
        out.temps_c[n - 1] += c * (t_inlet_c - s.temps_c[n - 1]);
    } else {
        // discharging: inflow at the top, water advances toward the bottom
        out.temps_c[0] += c * (t_inlet_c - s.temps_c[0]);
        for (int i = 1; i < n; ++i)
            out.temps_c[i] += c * (s.temps_c[i - 1] - s.temps_c[i]);
    }
    return out;
}

double tank_soc(const TankState& s) {
    const double dt_nom = s.t_top_nominal_c - s.t_bottom_nominal_c;
    if (dt_nom == 0.0) throw std::invalid_argument("tank_soc: nominal temperatures coincide");
    const double mean =
        std::accumulate(s.temps_c.begin(), s.temps_c.end(), 0.0) / s.temps_c.size();
    const double soc = (s.t_top_nominal_c - mean) / dt_nom;
    return soc < 0.0 ? 0.0 : (soc > 1.0 ? 1.0 : soc);
}

} // namespace dcgridsim::plant
