#include "dcgridsim/io/example_data.hpp"
#include "dcgridsim/market/score.hpp"
#include "dcgridsim/plant/plant.hpp"
#include "dcgridsim/sched/forecast.hpp"
#include "dcgridsim/sched/mpc.hpp"
#include "dcgridsim/sim/scenario.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace dcgridsim;

namespace {

sim::SystemSetup bench_setup() {
    sim::SystemSetup s;
    s.params.servers.service_rate_k = 50.0;
    return s;
}

void BM_PlantStep(benchmark::State& state) {
    auto setup = bench_setup();
    auto st = sim::make_initial_state(setup);
    plant::ControlCommand cmd;
    cmd.freq = 0.8;
    cmd.n_active_servers = 9000;
    cmd.chiller_setpoint_kw = 1400.0;
    cmd.charge_setpoint_kw = 100.0;
    for (auto _ : state) {
        auto out = plant::plant_step(st, cmd, 270000.0, 23.0, 4.0, setup.params);
        benchmark::DoNotOptimize(out.power_total_kw);
    }
}
BENCHMARK(BM_PlantStep);

void BM_TankStep(benchmark::State& state) {
    auto tank = plant::make_tank(static_cast<int>(state.range(0)), 1982.0 * 4 * 3600.0, 4.186,
                                 12.0, 5.0, 0.5);
    for (auto _ : state) {
        tank = plant::tank_step(tank, 40.0, 5.0, 30.0);
        benchmark::DoNotOptimize(tank.temps_c.back());
    }
}
BENCHMARK(BM_TankStep)->Arg(10)->Arg(50);

void BM_PerformanceScore(benchmark::State& state) {
    std::vector<double> reg(900), res(900);
    for (std::size_t i = 0; i < reg.size(); ++i) {
        reg[i] = std::sin(2.0 * M_PI * static_cast<double>(i) / 225.0);
        res[i] = 0.9 * std::sin(2.0 * M_PI * (static_cast<double>(i) - 10.0) / 225.0);
    }
    const TimeSeries a(0, 4, reg), b(0, 4, res);
    for (auto _ : state) {
        auto sb = market::performance_score(a, b);
        benchmark::DoNotOptimize(sb.composite);
    }
}
BENCHMARK(BM_PerformanceScore);

void BM_Stage1Solve(benchmark::State& state) {
    auto setup = bench_setup();
    setup.sched.solver_max_evals = 400;
    auto st = sim::make_initial_state(setup);
    io::ExampleDataSpec spec;
    const auto inputs = io::make_example_inputs(spec);
    const auto fc = sched::build_forecasts(
        spec.start_s, 12, inputs.market.energy_price, inputs.market.regulation_price,
        inputs.workload, inputs.wetbulb, inputs.market.reg_signal, nullptr);
    auto cfg = setup.sched;
    cfg.demand_limit_kw = 1990.0;
    for (auto _ : state) {
        auto s1 = sched::stage1_baseline_schedule(fc, cfg, st, setup.params, nullptr);
        benchmark::DoNotOptimize(s1.objective);
    }
}
BENCHMARK(BM_Stage1Solve)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
