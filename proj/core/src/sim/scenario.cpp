#include "dcgridsim/sim/scenario.hpp"

#include "dcgridsim/sched/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dcgridsim::sim {

const char* scenario_name(Scenario s) {
    switch (s) {
    case Scenario::BL: return "BL";
    case Scenario::BL_MM: return "BL_MM";
    case Scenario::OPBL_MM: return "OPBL_MM";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "BL") return Scenario::BL;
    if (name == "BL_MM" || name == "BL+MM") return Scenario::BL_MM;
    if (name == "OPBL_MM" || name == "OPBL+MM") return Scenario::OPBL_MM;
    throw std::invalid_argument("unknown scenario '" + name + "' (expected BL, BL_MM or OPBL_MM)");
}

void ScenarioConfig::validate() const {
    if (hours < 1) throw std::invalid_argument("scenario: span must cover at least one hour");
    if (dt_inner_s <= 0 || dt_schedule_s % dt_inner_s != 0)
        throw std::invalid_argument("scenario: schedule step must be a multiple of the inner step");
    if (3600 % dt_inner_s != 0)
        throw std::invalid_argument("scenario: inner step must divide one hour");
}

plant::PlantState make_initial_state(const SystemSetup& setup) {
    plant::PlantState st;
    st.tank = plant::make_tank(setup.tank_volumes, setup.tank_capacity_kj, setup.tank_cp_kj_per_kg_k,
                               setup.params.t_discharge_inlet_c, setup.params.t_charge_inlet_c,
                               setup.tank_initial_soc);
    st.chiller.capacity_nominal_kw = setup.chiller_capacity_kw;
    st.chiller.setpoint_max_kw = setup.params.limits.chiller_max_kw;
    st.chiller.setpoint_min_kw = setup.params.limits.chiller_min_kw;
    st.chiller.cop = setup.chiller_cop;
    st.chiller.tau_s = setup.chiller_tau_s;
    st.chiller.capacity_delivered_kw = 0.0;
    st.chiller.validate();
    st.room.capacitance_kj_per_k = setup.room_capacitance_kj_per_k;
    st.room.temp_min_c = setup.room_setpoint_c - setup.room_band_k;
    st.room.temp_max_c = setup.room_setpoint_c + setup.room_band_k;
    st.room.temp_c = setup.room_initial_c;
    st.room.validate();
    st.staging.delay_s = setup.params.mode_delay_s;
    return st;
}

ScenarioEngine::ScenarioEngine(const ScenarioConfig& cfg, const SystemSetup& setup,
                               const SimInputs* inputs)
    : cfg_(cfg), setup_(setup), inputs_(inputs), state_(make_initial_state(setup)),
      tracker_(setup.params.servers, setup.params.limits, setup.pid) {
    cfg_.validate();
    const std::int64_t end_s = cfg_.start_s + 3600LL * cfg_.hours;
    if (!inputs_->workload.covers(cfg_.start_s, end_s))
        throw std::invalid_argument("simulate: workload series does not cover the run span");
    if (!inputs_->wetbulb.covers(cfg_.start_s, end_s))
        throw std::invalid_argument("simulate: wet-bulb series does not cover the run span");
    inputs_->market.validate(cfg_.start_s, end_s);
    result_.scenario = cfg_.scenario;
    result_.start_s = cfg_.start_s;
    result_.dt_inner_s = cfg_.dt_inner_s;
    result_.ticks.reserve(static_cast<std::size_t>(cfg_.hours) * (3600 / cfg_.dt_inner_s));
    // prime the power measurement with a steady estimate
    last_power_kw_ = 0.0;
}

void ScenarioEngine::schedule_hour() {
    const std::int64_t t0 = cfg_.start_s + 3600LL * hour_;
    // forecasts run to the end of available data, at most the horizon
    const std::int64_t data_end =
        std::min({inputs_->workload.end_s(), inputs_->wetbulb.end_s(),
                  inputs_->market.energy_price.end_s(), inputs_->market.regulation_price.end_s()});
    const int hours_avail = static_cast<int>((data_end - t0) / 3600);
    const int horizon = std::max(1, std::min(setup_.sched.horizon_h, hours_avail));

    const TimeSeries* seed =
        inputs_->regd_hist.has_value() ? &inputs_->regd_hist.value() : nullptr;
    const auto fc = sched::build_forecasts(t0, horizon, inputs_->market.energy_price,
                                           inputs_->market.regulation_price, inputs_->workload,
                                           inputs_->wetbulb, inputs_->market.reg_signal, seed);
    auto cfg_sched = setup_.sched;
    cfg_sched.demand_limit_kw = cfg_.demand_limit_kw;
    cfg_sched.seed = cfg_.seed + static_cast<std::uint64_t>(hour_) * 977;

    const auto plan0 = sched::plan_servers_for_hour(fc.lambda[0], setup_.params.servers);
    hour_cooling_pred_ = plan0.cooling_pred_kw;
    hour_n_active_ = plan0.n_active;
    hour_freq_base_ = plan0.freq_base;

    switch (cfg_.scenario) {
    case Scenario::BL: {
        const auto u_c = sched::storage_priority_schedule(fc, setup_.onpeak, state_,
                                                          setup_.params, cfg_sched);
        hour_u_c_ = u_c[0];
        const auto plans = sched::plan_window(fc, setup_.params.servers);
        hour_power_base_ =
            sched::rollout_baseline(state_, setup_.params, fc, plans, u_c, cfg_sched).hourly_kw[0];
        hour_capacity_ = 0.0;
        hour_chiller_base_ = u_c[0];
        hour_has_fr_ = false;
        break;
    }
    case Scenario::BL_MM: {
        const auto u_c = sched::storage_priority_schedule(fc, setup_.onpeak, state_,
                                                          setup_.params, cfg_sched);
        const auto plans = sched::plan_window(fc, setup_.params.servers);
        const auto base_roll =
            sched::rollout_baseline(state_, setup_.params, fc, plans, u_c, cfg_sched);
        const auto s2 = sched::stage2_reserve_schedule(base_roll.hourly_kw, fc, cfg_sched, state_,
                                                       setup_.params,
                                                       warm_stage2_.empty() ? &u_c : &warm_stage2_);
        hour_power_base_ = base_roll.hourly_kw[0];
        hour_capacity_ = s2.fr_capacity_kw[0];
        hour_chiller_base_ = s2.chiller_base_kw[0];
        hour_u_c_ = hour_chiller_base_;
        hour_has_fr_ = hour_capacity_ > 0.0;
        warm_stage2_.assign(s2.chiller_base_kw.begin() + 1, s2.chiller_base_kw.end());
        warm_stage2_.push_back(s2.chiller_base_kw.back());
        break;
    }
    case Scenario::OPBL_MM: {
        const auto s1 =
            sched::stage1_baseline_schedule(fc, cfg_sched, state_, setup_.params,
                                            warm_stage1_.empty() ? nullptr : &warm_stage1_);
        const auto s2 = sched::stage2_reserve_schedule(
            s1.power_base_kw, fc, cfg_sched, state_, setup_.params,
            warm_stage2_.empty() ? &s1.chiller_setpoint_kw : &warm_stage2_);
        hour_power_base_ = s1.power_base_kw[0];
        hour_capacity_ = s2.fr_capacity_kw[0];
        hour_chiller_base_ = s2.chiller_base_kw[0];
        hour_u_c_ = hour_chiller_base_;
        hour_has_fr_ = hour_capacity_ > 0.0;
        warm_stage1_.assign(s1.chiller_setpoint_kw.begin() + 1, s1.chiller_setpoint_kw.end());
        warm_stage1_.push_back(s1.chiller_setpoint_kw.back());
        warm_stage2_.assign(s2.chiller_base_kw.begin() + 1, s2.chiller_base_kw.end());
        warm_stage2_.push_back(s2.chiller_base_kw.back());
        break;
    }
    }

    result_.schedule.push_back(
        {hour_, hour_power_base_, hour_capacity_, hour_chiller_base_});

    if (cfg_.scenario != Scenario::BL) {
        tracking::TrackingInputs tin;
        tin.power_base_kw = hour_power_base_;
        tin.fr_capacity_kw = hour_capacity_;
        tin.chiller_base_kw = hour_chiller_base_;
        tin.lambda_pred = fc.lambda[0];
        tin.cooling_pred_kw = hour_cooling_pred_;
        tracker_.begin_hour(tin);
    }
}

void ScenarioEngine::run_hour() {
    if (done()) throw std::logic_error("simulate: run past the configured span");
    schedule_hour();

    const std::int64_t t_hour = cfg_.start_s + 3600LL * hour_;
    const int ticks_per_hour = static_cast<int>(3600 / cfg_.dt_inner_s);
    const double dt = static_cast<double>(cfg_.dt_inner_s);

    // prime the measurement on the very first tick of the run
    if (hour_ == 0 && result_.ticks.empty()) last_power_kw_ = hour_power_base_;

    for (int i = 0; i < ticks_per_hour; ++i) {
        const std::int64_t t = t_hour + cfg_.dt_inner_s * i;
        const double lambda = inputs_->workload.at_time(t);
        const double wb = inputs_->wetbulb.at_time(t);
        const double r = inputs_->market.reg_signal.at_time(t);

        plant::ControlCommand cmd;
        double power_ref = hour_power_base_;
        if (cfg_.scenario == Scenario::BL) {
            cmd.chiller_setpoint_kw = hour_u_c_;
            cmd.charge_setpoint_kw =
                std::clamp(hour_u_c_ - hour_cooling_pred_, setup_.params.limits.charge_min_kw,
                           setup_.params.limits.charge_max_kw);
            cmd.n_active_servers = hour_n_active_;
            cmd.freq = hour_freq_base_;
        } else {
            cmd = tracker_.step(r, last_power_kw_, dt);
            power_ref = tracker_.power_ref_kw();
        }

        const auto out = plant::plant_step(state_, cmd, lambda, wb, dt, setup_.params);
        last_power_kw_ = out.power_total_kw;

        TickRecord rec;
        rec.t = t;
        rec.reg_signal = hour_has_fr_ ? r : 0.0;
        rec.power_ref_kw = power_ref;
        rec.power_kw = out.power_total_kw;
        rec.freq = cmd.freq;
        rec.chiller_setpoint_kw = cmd.chiller_setpoint_kw;
        rec.charge_setpoint_kw = cmd.charge_setpoint_kw;
        rec.mode = static_cast<int>(state_.staging.mode);
        rec.soc = out.soc;
        rec.room_c = state_.room.temp_c;
        result_.ticks.push_back(rec);
    }
    result_.unmatched_mode_steps = state_.unmatched_mode_steps;
    ++hour_;
}

TimeSeries RunResult::power_series() const {
    std::vector<double> p(ticks.size());
    for (std::size_t i = 0; i < ticks.size(); ++i) p[i] = ticks[i].power_kw;
    return TimeSeries(start_s, dt_inner_s, std::move(p));
}

market::CostReport cost_report(const RunResult& run, const market::MarketData& mkt) {
    market::CostReport rep;
    const auto power = run.power_series();
    const std::int64_t t0 = run.start_s;
    const std::int64_t t1 = power.end_s();
    const double hours = static_cast<double>(t1 - t0) / 3600.0;
    rep.energy_mwh = power.mean_over(t0, t1) * hours / 1000.0;
    rep.energy_cost = market::energy_cost(mkt.energy_price.slice(t0, t1), power);
    rep.peak_demand_kw = market::peak_demand_30min(power);
    rep.demand_cost = rep.peak_demand_kw * mkt.demand_price;
    std::vector<double> caps;
    caps.reserve(run.schedule.size());
    for (const auto& row : run.schedule) caps.push_back(row.fr_capacity_kw);
    rep.fr_revenue = market::regulation_revenue(
        mkt.regulation_price.slice(t0, t0 + 3600LL * static_cast<std::int64_t>(caps.size())),
        TimeSeries(t0, 3600, caps));
    rep.total = rep.energy_cost + rep.demand_cost - rep.fr_revenue;
    return rep;
}

RunResult ScenarioEngine::finish() {
    while (!done()) run_hour();

    // hourly scores for FR hours
    for (const auto& row : result_.schedule) {
        if (row.fr_capacity_kw <= 0.0) continue;
        const std::int64_t h0 = cfg_.start_s + 3600LL * row.hour;
        std::vector<double> reg, res;
        const int ticks_per_hour = static_cast<int>(3600 / cfg_.dt_inner_s);
        reg.reserve(ticks_per_hour);
        res.reserve(ticks_per_hour);
        for (int i = 0; i < ticks_per_hour; ++i) {
            const auto& tick =
                result_.ticks[static_cast<std::size_t>(row.hour) * ticks_per_hour + i];
            reg.push_back(tick.reg_signal);
            res.push_back((tick.power_kw - row.power_base_kw) / row.fr_capacity_kw);
        }
        const TimeSeries reg_ts(h0, cfg_.dt_inner_s, std::move(reg));
        const TimeSeries res_ts(h0, cfg_.dt_inner_s, std::move(res));
        result_.scores.push_back({row.hour, market::performance_score(reg_ts, res_ts)});
    }
    result_.costs = cost_report(result_, inputs_->market);
    return result_;
}

RunResult run_scenario(const ScenarioConfig& cfg, const SystemSetup& setup,
                       const SimInputs& inputs) {
    ScenarioEngine engine(cfg, setup, &inputs);
    return engine.finish();
}

namespace {

std::string money(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

} // namespace

std::string report_text(const std::vector<RunResult>& runs) {
    if (runs.empty()) throw std::invalid_argument("report: no runs");
    const RunResult* bl = &runs.front();
    for (const auto& r : runs)
        if (r.scenario == Scenario::BL) bl = &r;

    std::ostringstream os;
    os << std::left;
    const auto row = [&](const std::string& label, auto get) {
        os << label;
        for (std::size_t i = label.size(); i < 22; ++i) os << ' ';
        for (const auto& r : runs) {
            const std::string cell = get(r);
            os << cell;
            for (std::size_t i = cell.size(); i < 12; ++i) os << ' ';
        }
        os << '\n';
    };
    row("Item", [](const RunResult& r) { return std::string(scenario_name(r.scenario)); });
    row("Energy (MWh)", [](const RunResult& r) { return money(r.costs.energy_mwh); });
    row("Energy Cost ($)", [](const RunResult& r) { return money(r.costs.energy_cost); });
    row("Demand (kW)", [](const RunResult& r) { return money(r.costs.peak_demand_kw); });
    row("Demand Cost ($)", [](const RunResult& r) { return money(r.costs.demand_cost); });
    row("FR Cost ($)", [](const RunResult& r) { return money(-r.costs.fr_revenue); });
    row("Total Cost ($)", [](const RunResult& r) { return money(r.costs.total); });
    row("Relative Savings", [&](const RunResult& r) {
        const double savings = (bl->costs.total - r.costs.total) / bl->costs.total * 100.0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f%%", savings);
        return std::string(buf);
    });
    return os.str();
}

std::string report_csv(const std::vector<RunResult>& runs) {
    if (runs.empty()) throw std::invalid_argument("report: no runs");
    const RunResult* bl = &runs.front();
    for (const auto& r : runs)
        if (r.scenario == Scenario::BL) bl = &r;
    std::ostringstream os;
    os << "scenario,energy_mwh,energy_cost,peak_demand_kw,demand_cost,fr_cost,total,"
          "savings_vs_bl_pct\n";
    for (const auto& r : runs) {
        const double savings = (bl->costs.total - r.costs.total) / bl->costs.total * 100.0;
        os << scenario_name(r.scenario) << ',' << format_csv_number(r.costs.energy_mwh) << ','
           << format_csv_number(r.costs.energy_cost) << ','
           << format_csv_number(r.costs.peak_demand_kw) << ','
           << format_csv_number(r.costs.demand_cost) << ','
           << format_csv_number(-r.costs.fr_revenue) << ',' << format_csv_number(r.costs.total)
           << ',' << format_csv_number(savings) << '\n';
    }
    return os.str();
}

void write_run_result(const std::string& dir, const RunResult& run) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(dir + "/ticks.csv");
        out << "t,r,P_ref,P_dc,f_agg,u_c_set,u_s_set,mode,SoC,T_room\n";
        for (const auto& k : run.ticks) {
            out << format_iso8601(k.t) << ',' << format_csv_number(k.reg_signal) << ','
                << format_csv_number(k.power_ref_kw) << ',' << format_csv_number(k.power_kw) << ','
                << format_csv_number(k.freq) << ',' << format_csv_number(k.chiller_setpoint_kw)
                << ',' << format_csv_number(k.charge_setpoint_kw) << ',' << k.mode << ','
                << format_csv_number(k.soc) << ',' << format_csv_number(k.room_c) << '\n';
        }
    }
    {
        std::ofstream out(dir + "/schedule.csv");
        out << "hour,P_bas_kW,C_reg_kW,u_c_set_bas_kW\n";
        for (const auto& row : run.schedule)
            out << row.hour << ',' << format_csv_number(row.power_base_kw) << ','
                << format_csv_number(row.fr_capacity_kw) << ','
                << format_csv_number(row.chiller_base_kw) << '\n';
    }
    {
        std::ofstream out(dir + "/scores.csv");
        out << "hour,s_acc,s_del,s_pre,s,delta_star_s\n";
        for (const auto& hs : run.scores)
            out << hs.hour << ',' << format_csv_number(hs.score.accuracy) << ','
                << format_csv_number(hs.score.delay) << ',' << format_csv_number(hs.score.precision)
                << ',' << format_csv_number(hs.score.composite) << ','
                << format_csv_number(hs.score.delay_at_max_s) << '\n';
    }
    {
        std::ofstream out(dir + "/cost_report.csv");
        out << "energy_mwh,energy_cost,peak_demand_kw,demand_cost,fr_revenue,total\n";
        out << format_csv_number(run.costs.energy_mwh) << ','
            << format_csv_number(run.costs.energy_cost) << ','
            << format_csv_number(run.costs.peak_demand_kw) << ','
            << format_csv_number(run.costs.demand_cost) << ','
            << format_csv_number(run.costs.fr_revenue) << ',' << format_csv_number(run.costs.total)
            << '\n';
    }
    {
        std::ofstream out(dir + "/meta.txt");
        out << "scenario=" << scenario_name(run.scenario) << '\n'
            << "start=" << format_iso8601(run.start_s) << '\n'
            << "dt_inner_s=" << run.dt_inner_s << '\n'
            << "ticks=" << run.ticks.size() << '\n'
            << "unmatched_mode_steps=" << run.unmatched_mode_steps << '\n';
    }
}

RunResult read_run_result(const std::string& dir) {
    RunResult run;
    {
        std::ifstream in(dir + "/meta.txt");
        if (!in) throw std::runtime_error("not a run directory (no meta.txt): " + dir);
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(0, eq);
            const std::string val = line.substr(eq + 1);
            if (key == "scenario") run.scenario = scenario_from_name(val);
            else if (key == "start") run.start_s = parse_iso8601(val);
            else if (key == "dt_inner_s") run.dt_inner_s = std::stoll(val);
        }
    }
    {
        std::ifstream in(dir + "/cost_report.csv");
        if (!in) throw std::runtime_error("missing cost_report.csv in " + dir);
        std::string header, line;
        std::getline(in, header);
        if (!std::getline(in, line)) throw std::runtime_error("empty cost report in " + dir);
        std::istringstream ls(line);
        std::string cell;
        double* fields[] = {&run.costs.energy_mwh, &run.costs.energy_cost,
                            &run.costs.peak_demand_kw, &run.costs.demand_cost,
                            &run.costs.fr_revenue, &run.costs.total};
        for (double* f : fields) {
            if (!std::getline(ls, cell, ',')) throw std::runtime_error("short cost report in " + dir);
            *f = std::stod(cell);
        }
    }
    return run;
}

} // namespace dcgridsim::sim
