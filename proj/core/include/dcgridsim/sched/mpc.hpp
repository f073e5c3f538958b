#pragma once

#include "dcgridsim/plant/plant.hpp"
#include "dcgridsim/sched/forecast.hpp"
#include "dcgridsim/sched/solver.hpp"

#include <cstdint>
#include <vector>

namespace dcgridsim::sched {

struct OptProblemConfig {
    int horizon_h = 12;
    double demand_limit_kw = 1990.0;
    double demand_price = 7.48; ///< $/kW applied to the worst 30-min overshoot
    double soc_min = 0.05;
    double soc_max = 0.95;
    double penalty_soc = 1000.0;  ///< $ per (percent SoC)^2 of violation, per hour
    double penalty_room = 1000.0; ///< $ per K^2 of violation, per hour
    int solver_max_evals = 900;
    std::uint64_t seed = 0;
    bool reduced_order_rollout = false;

    void validate() const;
};

/// Hourly trajectories produced by the scheduling stages.
struct Schedule {
    std::int64_t start_s = 0;
    std::vector<double> chiller_setpoint_kw; ///< stage-1 u_c,set per hour
    std::vector<double> power_base_kw;       ///< P_bas per hour
    std::vector<double> fr_capacity_kw;      ///< C_reg per hour
    std::vector<double> chiller_base_kw;     ///< stage-2 u_c,set,bas per hour
    double objective = 0.0;
    bool converged = true;
};

/// Predictive rollout of the plant over the window under hourly chiller
/// setpoints, optionally modulated by the historical regulation signal.
struct RolloutResult {
    std::vector<double> power_kw;   ///< 5-min samples of P_dc
    std::vector<double> hourly_kw;  ///< hourly means of P_dc
    double violation_cost = 0.0;    ///< state-constraint penalty, $
    double soc_end = 0.0;
};

/// Server plans per hour of the window, derived once per solve.
std::vector<HourServerPlan> plan_window(const Forecasts& f, const plant::AggregatorParams& p);

RolloutResult rollout_baseline(const plant::PlantState& state0, const plant::PlantParams& pp,
                               const Forecasts& f, const std::vector<HourServerPlan>& plans,
                               const std::vector<double>& chiller_setpoints_kw,
                               const OptProblemConfig& cfg);

RolloutResult rollout_regulated(const plant::PlantState& state0, const plant::PlantParams& pp,
                                const Forecasts& f, const std::vector<HourServerPlan>& plans,
                                const std::vector<double>& chiller_base_kw,
                                const std::vector<double>& power_base_kw,
                                const std::vector<double>& fr_capacity_kw,
                                const OptProblemConfig& cfg);

/// Stage 1: minimize energy cost plus demand penalty over the horizon by
/// choosing the hourly chiller setpoint; returns the setpoint trajectory and
/// the implied power baseline.
Schedule stage1_baseline_schedule(const Forecasts& f, const OptProblemConfig& cfg,
                                  const plant::PlantState& state0, const plant::PlantParams& pp,
                                  const std::vector<double>* warm_start);

/// Stage 2: given the purchased baseline, choose the hourly base chiller
/// setpoint maximizing regulation revenue net of energy and demand effects;
/// the capacity bid is implied hour by hour.
Schedule stage2_reserve_schedule(const std::vector<double>& power_base_kw, const Forecasts& f,
                                 const OptProblemConfig& cfg, const plant::PlantState& state0,
                                 const plant::PlantParams& pp,
                                 const std::vector<double>* warm_start);

/// Per-hour box for the chiller setpoint after substituting the storage
/// balance: the charge setpoint must stay within its physical range.
Box chiller_setpoint_box(double cooling_pred_kw, const plant::PlantParams& pp);

} // namespace dcgridsim::sched
