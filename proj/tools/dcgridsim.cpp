// Command-line front end: simulate scenarios, score an hour of regulation
// tracking, run one-shot schedule solves, and compare run results.

#include "dcgridsim/io/config.hpp"
#include "dcgridsim/io/example_data.hpp"
#include "dcgridsim/market/score.hpp"
#include "dcgridsim/sched/forecast.hpp"
#include "dcgridsim/sched/mpc.hpp"
#include "dcgridsim/sim/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace dcgridsim;

int thread_cap() {
    if (const char* env = std::getenv("DCGRIDSIM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

sim::ScenarioConfig scenario_config(const io::FullConfig& cfg, sim::Scenario sc) {
    sim::ScenarioConfig c;
    c.scenario = sc;
    c.start_s = cfg.manifest.start_s;
    c.hours = cfg.manifest.hours;
    c.seed = cfg.manifest.seed;
    c.demand_limit_kw =
        sc == sim::Scenario::OPBL_MM ? cfg.demand_limit_opbl_kw : cfg.demand_limit_bl_kw;
    return c;
}

int cmd_simulate(const std::string& config_path, std::string scenario, std::string out_dir,
                 std::uint64_t* seed_override) {
    auto cfg = io::load_config(config_path);
    if (!scenario.empty()) cfg.manifest.scenario = scenario;
    if (!out_dir.empty()) cfg.manifest.out_dir = out_dir;
    if (seed_override != nullptr) cfg.manifest.seed = *seed_override;

    const auto inputs = io::load_inputs(cfg);

    std::vector<sim::Scenario> wanted;
    if (cfg.manifest.scenario == "all") {
        wanted = {sim::Scenario::BL, sim::Scenario::BL_MM, sim::Scenario::OPBL_MM};
    } else {
        wanted = {sim::scenario_from_name(cfg.manifest.scenario)};
    }

    fs::create_directories(cfg.manifest.out_dir);
    std::vector<sim::RunResult> results(wanted.size());
    std::vector<std::string> failures(wanted.size());

    const auto run_one = [&](std::size_t i) {
        const auto sc = wanted[i];
        const std::string dir = cfg.manifest.out_dir + "/" + sim::scenario_name(sc);
        try {
            fs::create_directories(dir);
            fs::remove(dir + "/FAILED.txt");
            results[i] = sim::run_scenario(scenario_config(cfg, sc), cfg.setup, inputs);
            sim::write_run_result(dir, results[i]);
        } catch (const std::exception& e) {
            failures[i] = e.what();
            std::ofstream marker(dir + "/FAILED.txt");
            marker << e.what() << "\n";
        }
    };

    // scenarios are independent; run them in parallel up to the thread cap
    const int cap = std::min<int>(thread_cap(), static_cast<int>(wanted.size()));
    if (cap <= 1 || wanted.size() == 1) {
        for (std::size_t i = 0; i < wanted.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        while (next < wanted.size()) {
            pool.clear();
            for (int t = 0; t < cap && next < wanted.size(); ++t) pool.emplace_back(run_one, next++);
            for (auto& th : pool) th.join();
        }
    }

    bool failed = false;
    for (std::size_t i = 0; i < wanted.size(); ++i) {
        if (!failures[i].empty()) {
            std::cerr << "scenario " << sim::scenario_name(wanted[i]) << " failed: " << failures[i]
                      << "\n";
            failed = true;
        }
    }
    if (failed) return 1;

    const std::string text = sim::report_text(results);
    std::cout << text;
    std::ofstream rep_txt(cfg.manifest.out_dir + "/report.txt");
    rep_txt << text;
    std::ofstream rep_csv(cfg.manifest.out_dir + "/report.csv");
    rep_csv << sim::report_csv(results);
    return 0;
}

int cmd_score(const std::string& reg_path, const std::string& res_path) {
    const auto reg = load_series_csv(reg_path);
    const auto res = load_series_csv(res_path);
    const auto sb = market::performance_score(reg, res);
    std::cout << "s_acc=" << sb.accuracy << " s_del=" << sb.delay << " s_pre=" << sb.precision
              << " delta_star_s=" << sb.delay_at_max_s << "\n";
    std::cout << "s=" << sb.composite << "\n";
    return 0;
}

int cmd_schedule(const std::string& config_path, int stage, int hour) {
    auto cfg = io::load_config(config_path);
    const auto inputs = io::load_inputs(cfg);
    const std::int64_t t0 = cfg.manifest.start_s + 3600LL * hour;
    const std::int64_t data_end =
        std::min({inputs.workload.end_s(), inputs.wetbulb.end_s(),
                  inputs.market.energy_price.end_s(), inputs.market.regulation_price.end_s()});
    const int horizon =
        std::max(1, std::min<int>(cfg.setup.sched.horizon_h,
                                  static_cast<int>((data_end - t0) / 3600)));
    const TimeSeries* seed = inputs.regd_hist.has_value() ? &*inputs.regd_hist : nullptr;
    const auto fc = sched::build_forecasts(t0, horizon, inputs.market.energy_price,
                                           inputs.market.regulation_price, inputs.workload,
                                           inputs.wetbulb, inputs.market.reg_signal, seed);
    auto scfg = cfg.setup.sched;
    scfg.demand_limit_kw = cfg.demand_limit_opbl_kw;
    scfg.demand_price = cfg.demand_price;
    scfg.seed = cfg.manifest.seed;
    const auto state = sim::make_initial_state(cfg.setup);

    const auto s1 = sched::stage1_baseline_schedule(fc, scfg, state, cfg.setup.params, nullptr);
    sched::Schedule out = s1;
    if (stage == 2)
        out = sched::stage2_reserve_schedule(s1.power_base_kw, fc, scfg, state, cfg.setup.params,
                                             &s1.chiller_setpoint_kw);
    std::cout << "hour,P_bas_kW,C_reg_kW,u_c_set_bas_kW\n";
    for (int h = 0; h < horizon; ++h) {
        std::cout << (hour + h) << ',' << format_csv_number(out.power_base_kw[h]) << ','
                  << format_csv_number(stage == 2 ? out.fr_capacity_kw[h] : 0.0) << ','
                  << format_csv_number(out.chiller_base_kw[h]) << "\n";
    }
    if (!out.converged) std::cerr << "warning: solver stopped at its evaluation budget\n";
    return 0;
}

int cmd_report(const std::vector<std::string>& run_dirs) {
    std::vector<sim::RunResult> runs;
    runs.reserve(run_dirs.size());
    for (const auto& d : run_dirs) {
        if (fs::exists(d + "/FAILED.txt"))
            throw std::runtime_error("run " + d + " is marked failed; not reporting it");
        runs.push_back(sim::read_run_result(d));
    }
    std::cout << sim::report_text(runs);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dcgridsim: data-center chilled-water storage scheduling and simulation"};
    app.require_subcommand(1);

    auto* sim_cmd = app.add_subcommand("simulate", "run one scenario (or all) and report costs");
    std::string sim_config, sim_scenario, sim_out;
    std::uint64_t sim_seed = 0;
    bool sim_seed_set = false;
    sim_cmd->add_option("--config", sim_config, "configuration file")->required();
    sim_cmd->add_option("--scenario", sim_scenario, "BL, BL_MM, OPBL_MM or all");
    sim_cmd->add_option("--out", sim_out, "output directory");
    sim_cmd->add_option("--seed", sim_seed, "override the configured seed")
        ->each([&](const std::string&) { sim_seed_set = true; });

    auto* score_cmd = app.add_subcommand("score", "score one hour of signal tracking");
    std::string score_reg, score_res;
    score_cmd->add_option("--reg", score_reg, "regulation signal CSV")->required();
    score_cmd->add_option("--res", score_res, "response signal CSV")->required();

    auto* sched_cmd = app.add_subcommand("schedule", "one-shot stage-1/2 solve");
    std::string sched_config;
    int sched_stage = 1, sched_hour = 0;
    sched_cmd->add_option("--config", sched_config, "configuration file")->required();
    sched_cmd->add_option("--stage", sched_stage, "1 or 2")->check(CLI::Range(1, 2));
    sched_cmd->add_option("--hour", sched_hour, "hour offset from the configured start")
        ->check(CLI::NonNegativeNumber);

    auto* rep_cmd = app.add_subcommand("report", "combine run directories into one table");
    std::vector<std::string> rep_runs;
    rep_cmd->add_option("--runs", rep_runs, "run directories")->required()->expected(-1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim_cmd->parsed())
            return cmd_simulate(sim_config, sim_scenario, sim_out,
                                sim_seed_set ? &sim_seed : nullptr);
        if (score_cmd->parsed()) return cmd_score(score_reg, score_res);
        if (sched_cmd->parsed()) return cmd_schedule(sched_config, sched_stage, sched_hour);
        if (rep_cmd->parsed()) return cmd_report(rep_runs);
    } catch (const std::exception& e) {
        std::cerr << "dcgridsim: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
