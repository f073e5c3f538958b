#include "dcgridsim/sched/mpc.hpp"

#include "dcgridsim/sched/fr_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcgridsim::sched {

namespace {

constexpr double kRolloutStepS = 300.0;
constexpr int kStepsPerHour = 12;

// Frequency whose server power equals the target; inverse of the power curve.
double invert_server_power(double target_kw, double lambda, int n_active,
                           const plant::AggregatorParams& p, double freq_lo, double freq_hi) {
    if (lambda <= 0.0 || n_active <= 0) return freq_hi;
    const double fixed_w = p.c0 + p.c1 * static_cast<double>(n_active);
    const double y = (target_kw * 1000.0 - fixed_w) / lambda - p.b0;
    if (y <= 0.0) return freq_lo;
    const double f = (-p.b1 + std::sqrt(p.b1 * p.b1 + 4.0 * p.b2 * y)) / (2.0 * p.b2);
    return std::clamp(f, freq_lo, freq_hi);
}

double estimate_aux_kw(const plant::PlantParams& pp, double cooling_load_kw, bool chiller_on,
                       bool tank_flowing) {
    double aux = pp.aux.pump_secondary_kw;
    if (chiller_on) aux += pp.aux.pump_primary_kw + pp.aux.pump_condenser_kw + pp.aux.tower_fan_kw;
    if (tank_flowing) aux += pp.aux.pump_transfer_kw;
    const double frac = cooling_load_kw / pp.aux.fan_design_load_kw;
    return aux + pp.aux.supply_fan_kw * frac * frac * frac;
}

struct ViolationTracker {
    double cost = 0.0;
    void add(double soc, double room_c, const plant::RoomState& room,
             const OptProblemConfig& cfg, double dt_h) {
        const double soc_v =
            (std::max(cfg.soc_min - soc, 0.0) + std::max(soc - cfg.soc_max, 0.0)) * 100.0;
        cost += cfg.penalty_soc * soc_v * soc_v * dt_h;
        const double room_v =
            std::max(room.temp_min_c - room_c, 0.0) + std::max(room_c - room.temp_max_c, 0.0);
        cost += cfg.penalty_room * room_v * room_v * dt_h;
    }
};

struct BlockCost {
    double energy = 0.0;
    double demand = 0.0;
};

// Energy cost and worst 30-min overshoot from the 5-min power samples.
BlockCost market_cost(const std::vector<double>& power_kw, const Forecasts& f,
                      const OptProblemConfig& cfg) {
    BlockCost out;
    double worst_block = 0.0;
    for (std::size_t b = 0; (b + 1) * 6 <= power_kw.size(); ++b) {
        double mean = 0.0;
        for (std::size_t i = 0; i < 6; ++i) mean += power_kw[b * 6 + i];
        mean /= 6.0;
        worst_block = std::max(worst_block, mean - cfg.demand_limit_kw);
    }
    out.demand = std::max(worst_block, 0.0) * cfg.demand_price;
    for (int h = 0; h < f.hours; ++h) {
        double mean = 0.0;
        for (int i = 0; i < kStepsPerHour; ++i)
            mean += power_kw[static_cast<std::size_t>(h) * kStepsPerHour + i];
        mean /= kStepsPerHour;
        out.energy += f.energy_price[h] * mean;
    }
    return out;
}

// Reduced-order surrogate state: the tank collapses to a SoC integrator and
// the chiller delivers its setpoint within the step.
struct SurrogateState {
    double soc;
    double room_c;
    double room_capacitance_kj_per_k;
    double capacity_kj;
    double cop;
};

SurrogateState surrogate_from(const plant::PlantState& st) {
    SurrogateState s{};
    s.soc = plant::tank_soc(st.tank);
    s.room_c = st.room.temp_c;
    s.room_capacitance_kj_per_k = st.room.capacitance_kj_per_k;
    s.capacity_kj = st.tank.capacity_kj();
    s.cop = st.chiller.cop;
    return s;
}

// One 5-min surrogate step; returns total power.
double surrogate_step(SurrogateState& s, const plant::PlantParams& pp, double chiller_set_kw,
                      double charge_set_kw, double server_power_kw, double cooling_load_kw,
                      double wetbulb_c) {
    const bool chiller_on = chiller_set_kw >= pp.limits.chiller_min_kw;
    const double u_c = chiller_on ? std::min(chiller_set_kw, pp.limits.chiller_max_kw) : 0.0;
    double u_s = std::clamp(charge_set_kw, pp.limits.charge_min_kw, pp.limits.charge_max_kw);
    const double headroom_kwh = (1.0 - s.soc) * s.capacity_kj / 3600.0;
    const double stored_kwh = s.soc * s.capacity_kj / 3600.0;
    const double dt_h = kRolloutStepS / 3600.0;
    if (u_s > 0.0) u_s = std::min(u_s, headroom_kwh / dt_h);
    if (u_s < 0.0) u_s = -std::min(-u_s, stored_kwh / dt_h);
    s.soc += u_s * dt_h * 3600.0 / s.capacity_kj;
    s.room_c += kRolloutStepS * (cooling_load_kw - (u_c - u_s)) / s.room_capacitance_kj_per_k;
    const double cop_eff = s.cop * pp.cop_scale(wetbulb_c);
    const double aux = estimate_aux_kw(pp, cooling_load_kw, chiller_on, u_s != 0.0);
    return server_power_kw + u_c / cop_eff + aux;
}

} // namespace

void OptProblemConfig::validate() const {
    if (horizon_h < 1) throw std::invalid_argument("scheduler: horizon must be >= 1 h");
    if (!(soc_min < soc_max)) throw std::invalid_argument("scheduler: SoC bounds inverted");
    if (!(penalty_soc > 0.0) || !(penalty_room > 0.0))
        throw std::invalid_argument("scheduler: penalty weights must be positive");
}

std::vector<HourServerPlan> plan_window(const Forecasts& f, const plant::AggregatorParams& p) {
    std::vector<HourServerPlan> plans;
    plans.reserve(f.hours);
    for (int h = 0; h < f.hours; ++h) plans.push_back(plan_servers_for_hour(f.lambda[h], p));
    return plans;
}

Box chiller_setpoint_box(double cooling_pred_kw, const plant::PlantParams& pp) {
    const auto& l = pp.limits;
    const double lo = std::max(l.chiller_min_kw, cooling_pred_kw + l.charge_min_kw);
    const double hi = std::min(l.chiller_max_kw, cooling_pred_kw + l.charge_max_kw);
    if (lo > hi) return {l.chiller_min_kw, l.chiller_max_kw};
    return {lo, hi};
}

RolloutResult rollout_baseline(const plant::PlantState& state0, const plant::PlantParams& pp,
                               const Forecasts& f, const std::vector<HourServerPlan>& plans,
                               const std::vector<double>& chiller_setpoints_kw,
                               const OptProblemConfig& cfg) {
    RolloutResult out;
    out.power_kw.reserve(static_cast<std::size_t>(f.hours) * kStepsPerHour);
    out.hourly_kw.assign(f.hours, 0.0);
    ViolationTracker viol;
    const double dt_h = kRolloutStepS / 3600.0;

    if (cfg.reduced_order_rollout) {
        SurrogateState st = surrogate_from(state0);
        for (int h = 0; h < f.hours; ++h) {
            const auto& plan = plans[h];
            const double u_c = chiller_setpoints_kw[h];
            const double u_s_set = std::clamp(u_c - plan.cooling_pred_kw, pp.limits.charge_min_kw,
                                              pp.limits.charge_max_kw);
            double hour_mean = 0.0;
            for (int i = 0; i < kStepsPerHour; ++i) {
                const double p = surrogate_step(st, pp, u_c, u_s_set, plan.power_base_kw,
                                                plan.cooling_pred_kw, f.wetbulb_c[h]);
                out.power_kw.push_back(p);
                hour_mean += p;
                viol.add(st.soc, st.room_c, state0.room, cfg, dt_h);
            }
            out.hourly_kw[h] = hour_mean / kStepsPerHour;
        }
        out.soc_end = st.soc;
        out.violation_cost = viol.cost;
        return out;
    }

    plant::PlantState st = state0;
    for (int h = 0; h < f.hours; ++h) {
        const auto& plan = plans[h];
        plant::ControlCommand cmd;
        cmd.n_active_servers = plan.n_active;
        cmd.freq = plan.freq_base;
        cmd.chiller_setpoint_kw = chiller_setpoints_kw[h];
        cmd.charge_setpoint_kw = std::clamp(chiller_setpoints_kw[h] - plan.cooling_pred_kw,
                                            pp.limits.charge_min_kw, pp.limits.charge_max_kw);
        double hour_mean = 0.0;
        for (int i = 0; i < kStepsPerHour; ++i) {
            const auto o =
                plant::plant_advance(st, cmd, f.lambda[h], f.wetbulb_c[h], kRolloutStepS, pp);
            out.power_kw.push_back(o.power_total_kw);
            hour_mean += o.power_total_kw;
            viol.add(o.soc, st.room.temp_c, st.room, cfg, dt_h);
        }
        out.hourly_kw[h] = hour_mean / kStepsPerHour;
    }
    out.soc_end = plant::tank_soc(st.tank);
    out.violation_cost = viol.cost;
    return out;
}

RolloutResult rollout_regulated(const plant::PlantState& state0, const plant::PlantParams& pp,
                                const Forecasts& f, const std::vector<HourServerPlan>& plans,
                                const std::vector<double>& chiller_base_kw,
                                const std::vector<double>& power_base_kw,
                                const std::vector<double>& fr_capacity_kw,
                                const OptProblemConfig& cfg) {
    RolloutResult out;
    out.power_kw.reserve(static_cast<std::size_t>(f.hours) * kStepsPerHour);
    out.hourly_kw.assign(f.hours, 0.0);
    ViolationTracker viol;
    const double dt_h = kRolloutStepS / 3600.0;
    const double cop = state0.chiller.cop;

    const bool reduced = cfg.reduced_order_rollout;
    plant::PlantState st = state0;
    SurrogateState sst = surrogate_from(state0);

    for (int h = 0; h < f.hours; ++h) {
        const auto& plan = plans[h];
        const double delta_uc =
            std::max(std::min(pp.limits.chiller_max_kw - chiller_base_kw[h],
                              chiller_base_kw[h] - pp.limits.chiller_min_kw),
                     0.0);
        double hour_mean = 0.0;
        for (int i = 0; i < kStepsPerHour; ++i) {
            const double r = f.reg_hist[static_cast<std::size_t>(h) * kStepsPerHour + i];
            const double u_c_set = chiller_base_kw[h] + r * delta_uc;
            const double u_s_set = std::clamp(u_c_set - plan.cooling_pred_kw,
                                              pp.limits.charge_min_kw, pp.limits.charge_max_kw);
            // servers pick up the reference net of the cooling-side power,
            // the steady behavior of the stage-3 loop
            const double target_total = power_base_kw[h] + r * fr_capacity_kw[h];
            const double cop_eff = cop * pp.cop_scale(f.wetbulb_c[h]);
            const double aux_est = estimate_aux_kw(pp, plan.cooling_pred_kw,
                                                   u_c_set >= pp.limits.chiller_min_kw,
                                                   u_s_set != 0.0);
            const double server_target = target_total - u_c_set / cop_eff - aux_est;
            const double freq = invert_server_power(server_target, f.lambda[h], plan.n_active,
                                                    pp.servers, plan.freq_min, pp.servers.freq_max);
            double p_total;
            if (reduced) {
                const double p_srv =
                    plant::aggregator_power(f.lambda[h], freq, plan.n_active, pp.servers) / 1000.0;
                p_total = surrogate_step(sst, pp, u_c_set, u_s_set, p_srv, plan.cooling_pred_kw,
                                         f.wetbulb_c[h]);
                viol.add(sst.soc, sst.room_c, state0.room, cfg, dt_h);
            } else {
                plant::ControlCommand cmd;
                cmd.n_active_servers = plan.n_active;
                cmd.freq = freq;
                cmd.chiller_setpoint_kw = u_c_set;
                cmd.charge_setpoint_kw = u_s_set;
                const auto o =
                    plant::plant_advance(st, cmd, f.lambda[h], f.wetbulb_c[h], kRolloutStepS, pp);
                p_total = o.power_total_kw;
                viol.add(o.soc, st.room.temp_c, st.room, cfg, dt_h);
            }
            out.power_kw.push_back(p_total);
            hour_mean += p_total;
        }
        out.hourly_kw[h] = hour_mean / kStepsPerHour;
    }
    out.soc_end = reduced ? sst.soc : plant::tank_soc(st.tank);
    out.violation_cost = viol.cost;
    return out;
}

Schedule stage1_baseline_schedule(const Forecasts& f, const OptProblemConfig& cfg,
                                  const plant::PlantState& state0, const plant::PlantParams& pp,
                                  const std::vector<double>* warm_start) {
    cfg.validate();
    const auto plans = plan_window(f, pp.servers);
    std::vector<Box> bounds;
    bounds.reserve(f.hours);
    for (int h = 0; h < f.hours; ++h)
        bounds.push_back(chiller_setpoint_box(plans[h].cooling_pred_kw, pp));

    const auto objective = [&](const std::vector<double>& x) {
        const auto roll = rollout_baseline(state0, pp, f, plans, x, cfg);
        const auto cost = market_cost(roll.power_kw, f, cfg);
        return cost.energy + cost.demand + roll.violation_cost;
    };

    std::vector<std::vector<double>> starts;
    if (warm_start != nullptr && static_cast<int>(warm_start->size()) == f.hours) {
        std::vector<double> w = *warm_start;
        for (int h = 0; h < f.hours; ++h) w[h] = std::clamp(w[h], bounds[h].lo, bounds[h].hi);
        starts.push_back(w);
    }
    std::vector<double> track_load(f.hours);
    for (int h = 0; h < f.hours; ++h)
        track_load[h] = std::clamp(plans[h].cooling_pred_kw, bounds[h].lo, bounds[h].hi);
    starts.push_back(track_load);
    std::vector<double> mid(f.hours);
    for (int h = 0; h < f.hours; ++h) mid[h] = 0.5 * (bounds[h].lo + bounds[h].hi);
    starts.push_back(mid);

    SolveOptions sopts;
    sopts.max_evals = cfg.solver_max_evals;
    sopts.seed = cfg.seed;
    const auto sol = solve_trajectory(objective, bounds, starts, sopts);

    Schedule s;
    s.start_s = f.start_s;
    s.chiller_setpoint_kw = sol.x;
    s.chiller_base_kw = sol.x;
    s.converged = sol.converged;
    s.objective = sol.objective;
    s.power_base_kw = rollout_baseline(state0, pp, f, plans, sol.x, cfg).hourly_kw;
    s.fr_capacity_kw.assign(f.hours, 0.0);
    return s;
}

Schedule stage2_reserve_schedule(const std::vector<double>& power_base_kw, const Forecasts& f,
                                 const OptProblemConfig& cfg, const plant::PlantState& state0,
                                 const plant::PlantParams& pp,
                                 const std::vector<double>* warm_start) {
    cfg.validate();
    if (static_cast<int>(power_base_kw.size()) < f.hours)
        throw std::invalid_argument("stage2: power baseline shorter than the horizon");
    const auto plans = plan_window(f, pp.servers);
    const double cop = state0.chiller.cop;
    std::vector<Box> bounds;
    bounds.reserve(f.hours);
    for (int h = 0; h < f.hours; ++h)
        bounds.push_back(chiller_setpoint_box(plans[h].cooling_pred_kw, pp));

    const auto capacities = [&](const std::vector<double>& x) {
        std::vector<double> c(f.hours);
        for (int h = 0; h < f.hours; ++h) {
            const double base =
                std::clamp(x[h], pp.limits.chiller_min_kw, pp.limits.chiller_max_kw);
            const double chiller = fr_capacity_chiller(base, pp.limits.chiller_min_kw,
                                                       pp.limits.chiller_max_kw, cop);
            c[h] = fr_capacity_total(plans[h].fr_capacity_kw, chiller);
        }
        return c;
    };

    const auto objective = [&](const std::vector<double>& x) {
        const auto caps = capacities(x);
        const auto roll = rollout_regulated(state0, pp, f, plans, x, power_base_kw, caps, cfg);
        const auto cost = market_cost(roll.power_kw, f, cfg);
        double revenue = 0.0;
        for (int h = 0; h < f.hours; ++h) revenue += f.regulation_price[h] * caps[h];
        return cost.energy + cost.demand - revenue + roll.violation_cost;
    };

    std::vector<std::vector<double>> starts;
    if (warm_start != nullptr && static_cast<int>(warm_start->size()) == f.hours) {
        std::vector<double> w = *warm_start;
        for (int h = 0; h < f.hours; ++h) w[h] = std::clamp(w[h], bounds[h].lo, bounds[h].hi);
        starts.push_back(w);
    }
    std::vector<double> mid(f.hours);
    for (int h = 0; h < f.hours; ++h) mid[h] = 0.5 * (bounds[h].lo + bounds[h].hi);
    starts.push_back(mid);

    SolveOptions sopts;
    sopts.max_evals = cfg.solver_max_evals;
    sopts.seed = cfg.seed + 1;
    const auto sol = solve_trajectory(objective, bounds, starts, sopts);

    Schedule s;
    s.start_s = f.start_s;
    s.chiller_base_kw = sol.x;
    s.chiller_setpoint_kw = sol.x;
    s.fr_capacity_kw = capacities(sol.x);
    s.power_base_kw.assign(power_base_kw.begin(), power_base_kw.begin() + f.hours);
    s.converged = sol.converged;
    s.objective = sol.objective;
    return s;
}

} // namespace dcgridsim::sched
