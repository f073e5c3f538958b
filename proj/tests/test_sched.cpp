#include "dcgridsim/sched/fr_capacity.hpp"
#include "dcgridsim/sched/mpc.hpp"
#include "dcgridsim/sched/solver.hpp"
#include "dcgridsim/sched/storage_priority.hpp"
#include "dcgridsim/sim/scenario.hpp"
#include "dcgridsim/tracking/server_mgmt.hpp"

#include <doctest.h>

#include <cmath>

using namespace dcgridsim;
using namespace dcgridsim::sched;

namespace {

plant::AggregatorParams servers_k100() {
    plant::AggregatorParams p;
    p.service_rate_k = 100.0;
    return p;
}

sim::SystemSetup test_setup() {
    sim::SystemSetup s;
    s.params.servers.service_rate_k = 50.0;
    s.sched.solver_max_evals = 500;
    return s;
}

Forecasts flat_forecasts(std::int64_t start, int hours, double lambda, double p_em, double p_rm) {
    Forecasts f;
    f.start_s = start;
    f.hours = hours;
    f.energy_price.assign(hours, p_em);
    f.regulation_price.assign(hours, p_rm);
    f.lambda.assign(hours, lambda);
    f.wetbulb_c.assign(hours, 22.0);
    f.reg_hist.assign(static_cast<std::size_t>(hours) * 12, 0.0);
    return f;
}

} // namespace

TEST_CASE("chiller regulation capacity") {
    CHECK(fr_capacity_chiller(1982.0, 99.1, 1982.0, 5.8) == doctest::Approx(0.0));
    CHECK(fr_capacity_chiller(99.1, 99.1, 1982.0, 5.8) == doctest::Approx(0.0));
    CHECK(fr_capacity_chiller(1000.0, 99.1, 1982.0, 5.8) == doctest::Approx(900.9 / 5.8));
    const double mid = 0.5 * (99.1 + 1982.0);
    CHECK(fr_capacity_chiller(mid, 99.1, 1982.0, 5.8) ==
          doctest::Approx((1982.0 - 99.1) / 2.0 / 5.8));
    CHECK_THROWS(fr_capacity_chiller(50.0, 99.1, 1982.0, 5.8));
}

TEST_CASE("chiller capacity is concave with its peak at the midpoint") {
    const double mid = 0.5 * (99.1 + 1982.0);
    const double peak = fr_capacity_chiller(mid, 99.1, 1982.0, 5.8);
    double prev = -1.0;
    for (double u = 99.1; u <= mid; u += 50.0) {
        const double c = fr_capacity_chiller(u, 99.1, 1982.0, 5.8);
        CHECK(c >= prev);
        CHECK(c <= peak + 1e-12);
        prev = c;
    }
}

TEST_CASE("server regulation capacity vanishes at the frequency extremes") {
    auto p = servers_k100();
    const double lambda = 50000.0;
    const int n = tracking::active_servers(lambda, p);
    const double f_min = tracking::min_frequency(lambda, n, p, p.response_cap_s);
    CHECK(fr_capacity_servers(lambda, n, p.freq_max, p) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fr_capacity_servers(lambda, n, f_min, p) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("server regulation capacity matches the direct evaluation") {
    auto p = servers_k100();
    std::uint64_t s = 99;
    const auto rnd = [&]() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(s >> 11) / 9007199254740992.0;
    };
    for (int i = 0; i < 100; ++i) {
        const double lambda = 1000.0 + 400000.0 * rnd();
        const int n = tracking::active_servers(lambda, p);
        const double f_min = tracking::min_frequency(lambda, n, p, p.response_cap_s);
        const double f_bas = f_min + (p.freq_max - f_min) * rnd();
        const double lib = fr_capacity_servers(lambda, n, f_bas, p);
        // direct evaluation of the five capacity equations
        const double pb = plant::aggregator_power(lambda, f_bas, n, p);
        const double pmax = plant::aggregator_power(lambda, p.freq_max, n, p);
        const double pmin = plant::aggregator_power(lambda, f_min, n, p);
        const double expect =
            std::min(std::max(pmax - pb, 0.0), std::max(pb - pmin, 0.0)) / 1000.0;
        CHECK(lib == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("total capacity is the sum of the parts") {
    CHECK(fr_capacity_total(0.0, 0.0) == 0.0);
    CHECK(fr_capacity_total(200.0, 155.33) == doctest::Approx(355.33));
    CHECK_THROWS(fr_capacity_total(-1.0, 0.0));
}

TEST_CASE("baseline frequency sits at the power midpoint") {
    auto p = servers_k100();
    const double f_min = 0.55;
    const double f_bas = baseline_frequency(f_min, p);
    const double poly = [&](double f) { return p.b1 * f + p.b2 * f * f; }(f_bas);
    const double expect = 0.5 * (p.b1 * f_min + p.b2 * f_min * f_min + p.b1 + p.b2);
    CHECK(poly == doctest::Approx(expect).epsilon(1e-12));
    CHECK(f_bas > f_min);
    CHECK(f_bas < 1.0);
}

TEST_CASE("solver finds a 1-d quadratic minimum") {
    const auto obj = [](const std::vector<double>& x) {
        return (x[0] - 0.3) * (x[0] - 0.3);
    };
    SolveOptions opts;
    opts.seed = 3;
    const auto r = solve_trajectory(obj, {{0.0, 1.0}}, {{0.9}}, opts);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(0.3).epsilon(1e-3));
}

TEST_CASE("solver is deterministic for a fixed seed") {
    const auto obj = [](const std::vector<double>& x) {
        double v = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            v += std::sin(3.0 * x[i]) + 0.1 * (x[i] - 0.2 * static_cast<double>(i)) *
                                            (x[i] - 0.2 * static_cast<double>(i));
        return v;
    };
    std::vector<Box> box(6, Box{-2.0, 2.0});
    std::vector<std::vector<double>> starts = {std::vector<double>(6, 0.0)};
    SolveOptions opts;
    opts.seed = 17;
    const auto a = solve_trajectory(obj, box, starts, opts);
    const auto b = solve_trajectory(obj, box, starts, opts);
    REQUIRE(a.x.size() == b.x.size());
    for (std::size_t i = 0; i < a.x.size(); ++i) CHECK(a.x[i] == b.x[i]); // bitwise
    CHECK(a.objective == b.objective);
}

TEST_CASE("solver matches grid search on a 2-step storage arbitrage toy") {
    // two hours, two price levels; the tank shifts chiller energy to the
    // cheap hour subject to its capacity
    const double q1 = 900.0, q2 = 1400.0;      // cooling loads, kW
    const double p1 = 0.02, p2 = 0.09;         // $/kWh
    const double cop = 5.8;
    const double soc0_kwh = 300.0, cap_kwh = 1200.0;
    const auto obj = [&](const std::vector<double>& x) {
        double soc = soc0_kwh;
        double cost = 0.0;
        const double prices[2] = {p1, p2};
        const double loads[2] = {q1, q2};
        for (int h = 0; h < 2; ++h) {
            double u_s = x[h] - loads[h];
            u_s = std::clamp(u_s, -soc, cap_kwh - soc);
            soc += u_s;
            cost += prices[h] * x[h] / cop;
            // unmet load is heavily penalized (room violation stand-in)
            const double unmet = loads[h] - (x[h] - u_s);
            cost += 5.0 * std::max(unmet, 0.0);
        }
        return cost;
    };
    std::vector<Box> box(2, Box{0.0, 1982.0});

    // exhaustive 41x41 oracle
    double best = 1e18, bx0 = 0, bx1 = 0;
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
            const double x0 = 1982.0 * i / 40.0, x1 = 1982.0 * j / 40.0;
            const double v = obj({x0, x1});
            if (v < best) {
                best = v;
                bx0 = x0;
                bx1 = x1;
            }
        }

    SolveOptions opts;
    opts.seed = 11;
    opts.max_evals = 6000;
    const auto r = solve_trajectory(obj, box, {{q1, q2}, {991.0, 991.0}}, opts);
    const double cell = 1982.0 / 40.0;
    CHECK(r.objective <= best + 1e-9);
    CHECK(std::abs(r.x[0] - bx0) <= cell + 1e-9);
    CHECK(std::abs(r.x[1] - bx1) <= cell + 1e-9);
}

TEST_CASE("stage 1 tracks the load under flat prices") {
    auto setup = test_setup();
    auto state = sim::make_initial_state(setup);
    auto f = flat_forecasts(0, 6, 250000.0, 0.04, 0.0);
    auto cfg = setup.sched;
    cfg.demand_limit_kw = 1e9; // never binding
    cfg.seed = 4;
    const auto s1 = stage1_baseline_schedule(f, cfg, state, setup.params, nullptr);
    const auto plans = plan_window(f, setup.params.servers);
    for (int h = 1; h < 6; ++h) { // first hour may settle the chiller lag
        CHECK(s1.chiller_setpoint_kw[h] ==
              doctest::Approx(plans[h].cooling_pred_kw).epsilon(0.05));
    }
}

TEST_CASE("stage 1 defers charging past a price spike") {
    auto setup = test_setup();
    setup.tank_initial_soc = 0.10;
    auto state = sim::make_initial_state(setup);
    auto f = flat_forecasts(0, 8, 220000.0, 0.03, 0.0);
    // hours 0-3 expensive, hours 4-7 cheap; charging should wait
    for (int h = 0; h < 4; ++h) f.energy_price[h] = 0.12;
    for (int h = 4; h < 8; ++h) f.energy_price[h] = 0.02;
    auto cfg = setup.sched;
    cfg.demand_limit_kw = 1e9;
    cfg.seed = 5;
    cfg.solver_max_evals = 1200;
    const auto s1 = stage1_baseline_schedule(f, cfg, state, setup.params, nullptr);
    const auto plans = plan_window(f, setup.params.servers);
    double spike_charge = 0.0, cheap_charge = 0.0;
    for (int h = 0; h < 4; ++h)
        spike_charge += std::max(s1.chiller_setpoint_kw[h] - plans[h].cooling_pred_kw, 0.0);
    for (int h = 4; h < 8; ++h)
        cheap_charge += std::max(s1.chiller_setpoint_kw[h] - plans[h].cooling_pred_kw, 0.0);
    CHECK(cheap_charge > spike_charge + 100.0);
}

TEST_CASE("stage 1 respects a demand limit in its own rollout") {
    auto setup = test_setup();
    setup.tank_initial_soc = 0.6;
    auto state = sim::make_initial_state(setup);
    auto f = flat_forecasts(0, 6, 300000.0, 0.05, 0.0);
    auto cfg = setup.sched;
    cfg.demand_limit_kw = 1990.0;
    cfg.seed = 6;
    cfg.solver_max_evals = 1500;
    const auto s1 = stage1_baseline_schedule(f, cfg, state, setup.params, nullptr);
    const auto plans = plan_window(f, setup.params.servers);
    const auto roll = rollout_baseline(state, setup.params, f, plans, s1.chiller_setpoint_kw, cfg);
    for (std::size_t b = 0; (b + 1) * 6 <= roll.power_kw.size(); ++b) {
        double mean = 0.0;
        for (int i = 0; i < 6; ++i) mean += roll.power_kw[b * 6 + i];
        mean /= 6.0;
        CHECK(mean <= 1990.0 * 1.005);
    }
}

TEST_CASE("stage 1 rollout keeps soc inside its band") {
    auto setup = test_setup();
    setup.tank_initial_soc = 0.5;
    auto state = sim::make_initial_state(setup);
    auto f = flat_forecasts(0, 8, 260000.0, 0.04, 0.0);
    for (int h = 4; h < 8; ++h) f.energy_price[h] = 0.10;
    auto cfg = setup.sched;
    cfg.demand_limit_kw = 1e9;
    cfg.seed = 7;
    const auto s1 = stage1_baseline_schedule(f, cfg, state, setup.params, nullptr);
    const auto plans = plan_window(f, setup.params.servers);
    plant::PlantState st = state;
    for (int h = 0; h < 8; ++h) {
        plant::ControlCommand cmd;
        cmd.n_active_servers = plans[h].n_active;
        cmd.freq = plans[h].freq_base;
        cmd.chiller_setpoint_kw = s1.chiller_setpoint_kw[h];
        cmd.charge_setpoint_kw = std::clamp(s1.chiller_setpoint_kw[h] - plans[h].cooling_pred_kw,
                                            setup.params.limits.charge_min_kw,
                                            setup.params.limits.charge_max_kw);
        for (int i = 0; i < 12; ++i) {
            const auto o =
                plant::plant_advance(st, cmd, f.lambda[h], 22.0, 300.0, setup.params);
            CHECK(o.soc >= cfg.soc_min - 0.005);
            CHECK(o.soc <= cfg.soc_max + 0.005);
        }
    }
}

TEST_CASE("unpriced reserve does not degrade the baseline objective") {
    auto setup = test_setup();
    auto state = sim::make_initial_state(setup);
    auto f = flat_forecasts(0, 6, 240000.0, 0.05, 0.0); // p_rm = 0, reg_hist = 0
    auto cfg = setup.sched;
    cfg.demand_limit_kw = 1e9;
    cfg.seed = 8;
    const auto s1 = stage1_baseline_schedule(f, cfg, state, setup.params, nullptr);
    const auto s2 = stage2_reserve_schedule(s1.power_base_kw, f, cfg, state, setup.params,
                                            &s1.chiller_setpoint_kw);
    CHECK(s2.objective >= s1.objective - 1.0);
    CHECK(s2.objective == doctest::Approx(s1.objective).epsilon(0.02));
}

TEST_CASE("stage 2 shrinks the bid when demand is tight") {
    auto setup = test_setup();
    setup.tank_initial_soc = 0.5;
    auto state = sim::make_initial_state(setup);
    auto loose = flat_forecasts(0, 4, 250000.0, 0.04, 0.03);
    auto cfg = setup.sched;
    cfg.seed = 9;
    cfg.solver_max_evals = 1200;

    cfg.demand_limit_kw = 1e9;
    const auto s1 = stage1_baseline_schedule(loose, cfg, state, setup.params, nullptr);
    const auto s2_loose = stage2_reserve_schedule(s1.power_base_kw, loose, cfg, state,
                                                  setup.params, &s1.chiller_setpoint_kw);

    // clamp the limit right at the baseline: excursions become expensive
    double base_peak = 0.0;
    for (double v : s1.power_base_kw) base_peak = std::max(base_peak, v);
    cfg.demand_limit_kw = base_peak;
    const auto s2_tight = stage2_reserve_schedule(s1.power_base_kw, loose, cfg, state,
                                                  setup.params, &s1.chiller_setpoint_kw);
    double loose_total = 0.0, tight_total = 0.0;
    for (int h = 0; h < 4; ++h) {
        loose_total += s2_loose.fr_capacity_kw[h];
        tight_total += s2_tight.fr_capacity_kw[h];
    }
    CHECK(tight_total < loose_total);
}

TEST_CASE("storage priority rule charges off-peak and drains on-peak") {
    auto setup = test_setup();
    setup.tank_initial_soc = 0.2;
    auto state = sim::make_initial_state(setup);
    // window starting at midnight: 11 off-peak hours then the peak period
    auto f = flat_forecasts(0, 12, 260000.0, 0.04, 0.0);
    OnPeakWindow onpeak;
    auto cfg = setup.sched;
    const auto u_c = storage_priority_schedule(f, onpeak, state, setup.params, cfg);
    // off-peak with an undercharged tank: chiller flat out
    CHECK(u_c[0] == doctest::Approx(setup.params.limits.chiller_max_kw));
    // on-peak: strictly below the load so the tank discharges
    const auto plans = plan_window(f, setup.params.servers);
    CHECK(u_c[11] < plans[11].cooling_pred_kw);
}

TEST_CASE("storage priority on zero on-peak load runs nothing on-peak") {
    auto setup = test_setup();
    setup.tank_initial_soc = 0.5;
    auto state = sim::make_initial_state(setup);
    auto f = flat_forecasts(11LL * 3600, 8, 1000.0, 0.04, 0.0); // tiny load all on-peak
    OnPeakWindow onpeak;
    const auto u_c = storage_priority_schedule(f, onpeak, state, setup.params, setup.sched);
    for (int h = 0; h < 8; ++h) CHECK(u_c[h] == doctest::Approx(0.0));
}

TEST_CASE("storage priority depletes to the floor at on-peak end") {
    auto setup = test_setup();
    setup.tank_initial_soc = 0.95;
    auto state = sim::make_initial_state(setup);
    auto f = flat_forecasts(11LL * 3600, 8, 300000.0, 0.04, 0.0);
    OnPeakWindow onpeak;
    const auto u_c = storage_priority_schedule(f, onpeak, state, setup.params, setup.sched);
    // replay the surrogate to the period end
    const auto plans = plan_window(f, setup.params.servers);
    double soc = 0.95;
    const double cap = state.tank.capacity_kj();
    for (int h = 0; h < 8; ++h) {
        const double u_c_eff = u_c[h] >= setup.params.limits.chiller_min_kw ? u_c[h] : 0.0;
        double u_s = std::clamp(u_c_eff - plans[h].cooling_pred_kw,
                                setup.params.limits.charge_min_kw,
                                setup.params.limits.charge_max_kw);
        u_s = std::max(u_s, -soc * cap / 3600.0);
        soc += u_s * 3600.0 / cap;
    }
    CHECK(soc == doctest::Approx(setup.sched.soc_min).epsilon(0.02));
}
