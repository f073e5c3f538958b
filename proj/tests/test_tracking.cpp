#include "dcgridsim/tracking/controller.hpp"
#include "dcgridsim/tracking/pid.hpp"
#include "dcgridsim/tracking/server_mgmt.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>

using namespace dcgridsim;
using namespace dcgridsim::tracking;

namespace {

plant::AggregatorParams servers_k100() {
    plant::AggregatorParams p;
    p.service_rate_k = 100.0;
    return p;
}

} // namespace

TEST_CASE("active server count") {
    auto p = servers_k100();
    CHECK(active_servers(0.0, p) == 0);
    // beta*gamma = 1.65 exactly in intent; the ceiling must not round the
    // binary representation upward
    CHECK(active_servers(900000.0, p) == 14850);
    CHECK(active_servers(900010.0, p) == 14851);
    p.n_servers_total = 100;
    CHECK(active_servers(7000.0, p) == 100); // clamped to the fleet
    p.n_servers_total = 0;
    CHECK_THROWS(active_servers(10.0, p));
}

TEST_CASE("min frequency recovers the worked response-time point") {
    auto p = servers_k100();
    const double cap = 0.010044194173824159; // t_r at rho = 0.5, lambda 500, 10 servers
    const double f = min_frequency(500.0, 10, p, cap);
    CHECK(f == doctest::Approx(1.0).epsilon(1e-6));
    const auto m = plant::response_time(500.0, f, 10, p);
    CHECK(m.response_time_s == doctest::Approx(cap).epsilon(1e-6));
}

TEST_CASE("min frequency limits") {
    auto p = servers_k100();
    // a loose cap pushes the utilization to the stability edge
    const double f_loose = min_frequency(500.0, 10, p, 1e6);
    CHECK(f_loose == doctest::Approx(500.0 / (100.0 * 10.0)).epsilon(1e-6));
    // halving the workload halves the frequency floor in that regime
    const double f_half = min_frequency(250.0, 10, p, 1e6);
    CHECK(f_half == doctest::Approx(0.5 * f_loose).epsilon(1e-9));
    // unattainable cap: even f_max cannot meet it
    CHECK_THROWS(min_frequency(900.0, 10, p, 1e-4));
}

TEST_CASE("min frequency meets the cap across random operating points") {
    auto p = servers_k100();
    std::uint64_t s = 12345;
    const auto rnd = [&]() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(s >> 11) / 9007199254740992.0;
    };
    for (int i = 0; i < 100; ++i) {
        p.service_rate_k = 20.0 + 180.0 * rnd();
        const int n = 2 + static_cast<int>(80.0 * rnd());
        const double rho_target = 0.15 + 0.8 * rnd();
        const double lambda = rho_target * p.service_rate_k * n * (0.3 + 0.69 * rnd());
        const double rho_lo = lambda / (p.service_rate_k * n);
        const double rho_star = std::max(rho_target, rho_lo + 1e-3);
        if (rho_star >= 0.999) continue;
        const double cap = plant::response_time_at_utilization(rho_star, lambda, n, p);
        const double f = min_frequency(lambda, n, p, cap);
        const auto m = plant::response_time(lambda, f, n, p);
        CHECK(m.response_time_s <= cap * (1.0 + 1e-6));
        CHECK(m.response_time_s == doctest::Approx(cap).epsilon(1e-6));
    }
}

TEST_CASE("reference power") {
    CHECK(reference_power(1800.0, 0.0, 300.0) == doctest::Approx(1800.0));
    CHECK(reference_power(1800.0, 1.0, 300.0) == doctest::Approx(2100.0));
    CHECK(reference_power(1800.0, -1.0, 300.0) == doctest::Approx(1500.0));
    CHECK_THROWS(reference_power(1800.0, 0.5, -1.0));
}

TEST_CASE("pid clamps and freezes the integral under saturation") {
    PidState s;
    s.kp = 1e-3;
    s.ki = 1e-4;
    s.out_min = 0.6;
    s.out_max = 1.0;

    // zero error with zero integral lands on the lower clamp
    auto out = pid_step(1000.0, 1000.0, s, 4.0);
    CHECK(out.freq == doctest::Approx(0.6));

    // constant positive error ratchets the output upward until saturation
    PidState t = s;
    double prev = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto o = pid_step(2000.0, 1000.0, t, 4.0);
        t = o.state;
        CHECK(o.freq >= prev - 1e-12);
        prev = o.freq;
    }
    CHECK(prev == doctest::Approx(1.0));
    const double frozen = t.integral;
    for (int i = 0; i < 50; ++i) t = pid_step(2000.0, 1000.0, t, 4.0).state;
    CHECK(t.integral == doctest::Approx(frozen)); // anti-windup holds it
}

TEST_CASE("cooling setpoints follow the signal inside the chiller range") {
    plant::CoolingLimits lims;
    const auto mid = cooling_fr_setpoints(1000.0, 0.0, lims, 1400.0);
    CHECK(mid.chiller_setpoint_kw == doctest::Approx(1000.0));
    CHECK(mid.charge_setpoint_kw == doctest::Approx(1000.0 - 1400.0));

    const auto up = cooling_fr_setpoints(1000.0, 1.0, lims, 1400.0);
    CHECK(up.chiller_range_kw == doctest::Approx(900.9));
    CHECK(up.chiller_setpoint_kw == doctest::Approx(1900.9));

    // below the load the tank discharges
    CHECK(mid.charge_setpoint_kw < 0.0);

    // every signal level stays within the chiller range
    for (double r = -1.0; r <= 1.0; r += 0.05) {
        const auto sp = cooling_fr_setpoints(300.0, r, lims, 900.0);
        CHECK(sp.chiller_setpoint_kw >= lims.chiller_min_kw - 1e-9);
        CHECK(sp.chiller_setpoint_kw <= lims.chiller_max_kw + 1e-9);
        CHECK(sp.charge_setpoint_kw >= lims.charge_min_kw - 1e-9);
        CHECK(sp.charge_setpoint_kw <= lims.charge_max_kw + 1e-9);
    }
    CHECK_THROWS(cooling_fr_setpoints(50.0, 0.0, lims, 900.0));
}

TEST_CASE("controller honors the frequency window and zero-bid hours") {
    auto p = servers_k100();
    plant::CoolingLimits lims;
    TrackingController ctl(p, lims, PidGains{});

    TrackingInputs in;
    in.power_base_kw = 1500.0;
    in.fr_capacity_kw = 0.0; // no bid: the signal must be ignored
    in.chiller_base_kw = 1000.0;
    in.lambda_pred = 60000.0;
    in.cooling_pred_kw = 1200.0;
    ctl.begin_hour(in);

    const auto cmd = ctl.step(0.9, 1500.0, 4.0);
    CHECK(ctl.power_ref_kw() == doctest::Approx(1500.0));
    CHECK(cmd.chiller_setpoint_kw == doctest::Approx(1000.0));

    in.fr_capacity_kw = 250.0;
    ctl.begin_hour(in);
    for (double r : {-1.0, -0.3, 0.2, 1.0}) {
        const auto c = ctl.step(r, 1400.0, 4.0);
        CHECK(c.freq >= ctl.freq_min() - 1e-12);
        CHECK(c.freq <= p.freq_max + 1e-12);
    }
    CHECK_THROWS(ctl.step(1.5, 1400.0, 4.0));
}
