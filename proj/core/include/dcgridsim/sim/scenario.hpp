#pragma once

#include "dcgridsim/market/costs.hpp"
#include "dcgridsim/market/score.hpp"
#include "dcgridsim/plant/plant.hpp"
#include "dcgridsim/sched/mpc.hpp"
#include "dcgridsim/sched/storage_priority.hpp"
#include "dcgridsim/timeseries.hpp"
#include "dcgridsim/tracking/controller.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dcgridsim::sim {

enum class Scenario { BL, BL_MM, OPBL_MM };

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

/// Everything needed to build the plant and its controllers.
struct SystemSetup {
    plant::PlantParams params;
    int tank_volumes = 10;
    double tank_capacity_kj = 28540800.0; ///< chiller capacity x 4 h
    double tank_cp_kj_per_kg_k = 4.186;
    double tank_initial_soc = 0.5;
    double chiller_capacity_kw = 1982.0;
    double chiller_cop = 5.8;
    double chiller_tau_s = 300.0;
    double room_capacitance_kj_per_k = 594600.0;
    double room_setpoint_c = 25.0;
    double room_band_k = 3.0;
    double room_initial_c = 25.0;
    sched::OptProblemConfig sched; ///< demand limit overridden per scenario
    sched::OnPeakWindow onpeak;
    tracking::PidGains pid;
};

plant::PlantState make_initial_state(const SystemSetup& setup);

struct ScenarioConfig {
    Scenario scenario = Scenario::BL;
    std::int64_t start_s = 0;
    int hours = 48;
    std::int64_t dt_inner_s = 4;
    std::int64_t dt_schedule_s = 3600;
    double demand_limit_kw = 1990.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// All input series for one run. regd_hist (optional) seeds the
/// historical-signal prediction for the first simulated day.
struct SimInputs {
    TimeSeries workload;
    TimeSeries wetbulb;
    market::MarketData market;
    std::optional<TimeSeries> regd_hist;
};

struct TickRecord {
    std::int64_t t = 0;
    double reg_signal = 0.0;
    double power_ref_kw = 0.0;
    double power_kw = 0.0;
    double freq = 0.0;
    double chiller_setpoint_kw = 0.0;
    double charge_setpoint_kw = 0.0;
    int mode = 4;
    double soc = 0.0;
    double room_c = 0.0;
};

struct ScheduleRow {
    int hour = 0;
    double power_base_kw = 0.0;
    double fr_capacity_kw = 0.0;
    double chiller_base_kw = 0.0;
};

struct HourScore {
    int hour = 0;
    market::ScoreBreakdown score;
};

struct RunResult {
    Scenario scenario = Scenario::BL;
    std::int64_t start_s = 0;
    std::int64_t dt_inner_s = 4;
    std::vector<TickRecord> ticks;
    std::vector<ScheduleRow> schedule;
    std::vector<HourScore> scores; ///< FR hours only
    market::CostReport costs;
    long unmatched_mode_steps = 0;

    TimeSeries power_series() const;
};

/// Hour-resolution simulation engine; copyable, so a snapshot mid-run can be
/// resumed independently.
class ScenarioEngine {
public:
    ScenarioEngine(const ScenarioConfig& cfg, const SystemSetup& setup, const SimInputs* inputs);

    void run_hour(); ///< schedule the next hour, then run its inner ticks
    bool done() const { return hour_ >= cfg_.hours; }
    int hour() const { return hour_; }
    const RunResult& partial_result() const { return result_; }

    /// Run to completion and attach the cost report.
    RunResult finish();

private:
    void schedule_hour();

    ScenarioConfig cfg_;
    SystemSetup setup_;
    const SimInputs* inputs_;
    plant::PlantState state_;
    tracking::TrackingController tracker_;
    RunResult result_;
    int hour_ = 0;
    double last_power_kw_ = 0.0;
    // current-hour plan
    double hour_u_c_ = 0.0;
    double hour_power_base_ = 0.0;
    double hour_capacity_ = 0.0;
    double hour_chiller_base_ = 0.0;
    double hour_cooling_pred_ = 0.0;
    int hour_n_active_ = 0;
    double hour_freq_base_ = 1.0;
    bool hour_has_fr_ = false;
    std::vector<double> warm_stage1_;
    std::vector<double> warm_stage2_;
};

RunResult run_scenario(const ScenarioConfig& cfg, const SystemSetup& setup,
                       const SimInputs& inputs);

market::CostReport cost_report(const RunResult& run, const market::MarketData& mkt);

/// Comparison table over several runs, rows as in the two-day cost study;
/// savings are relative to the BL result when present.
std::string report_text(const std::vector<RunResult>& runs);
std::string report_csv(const std::vector<RunResult>& runs);

/// Run artifacts written into a directory: ticks.csv, schedule.csv,
/// scores.csv, cost_report.csv, meta.
void write_run_result(const std::string& dir, const RunResult& run);
RunResult read_run_result(const std::string& dir); ///< enough for reporting

} // namespace dcgridsim::sim
