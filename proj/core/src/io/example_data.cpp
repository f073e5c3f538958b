#include "dcgridsim/io/example_data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

namespace dcgridsim::io {

namespace {

// Hour-of-day request shape, fraction of the daily peak. Broad midday hump
// with an evening shoulder and a flat night valley.
constexpr double kLoadShape[24] = {
    0.52, 0.48, 0.46, 0.46, 0.48, 0.52, // 0-5
    0.58, 0.66, 0.74, 0.80, 0.86, 0.92, // 6-11
    0.97, 1.00, 0.99, 0.96, 0.92, 0.88, // 12-17
    0.86, 0.85, 0.82, 0.76, 0.68, 0.58  // 18-23
};

// Real-time energy price shape ($/kWh): cheap nights, pricier afternoons,
// spike through the evening hours.
constexpr double kEnergyPrice[24] = {
    0.022, 0.020, 0.019, 0.019, 0.020, 0.022, // 0-5
    0.026, 0.030, 0.034, 0.038, 0.042, 0.046, // 6-11
    0.050, 0.052, 0.050, 0.048, 0.050, 0.058, // 12-17
    0.072, 0.085, 0.082, 0.071, 0.055, 0.034  // 18-23
};

// Regulation capacity price shape ($/kW-h).
constexpr double kRegulationPrice[24] = {
    0.022, 0.020, 0.018, 0.018, 0.019, 0.021, // 0-5
    0.024, 0.028, 0.031, 0.030, 0.028, 0.027, // 6-11
    0.026, 0.028, 0.030, 0.033, 0.036, 0.040, // 12-17
    0.044, 0.041, 0.036, 0.031, 0.027, 0.024  // 18-23
};

double shape_at(const double* table, double hour_of_day) {
    const int h0 = static_cast<int>(std::floor(hour_of_day)) % 24;
    const int h1 = (h0 + 1) % 24;
    const double w = hour_of_day - std::floor(hour_of_day);
    // cosine blend keeps the trace smooth across hour boundaries
    const double c = 0.5 - 0.5 * std::cos(w * 3.14159265358979323846);
    return table[h0] * (1.0 - c) + table[h1] * c;
}

TimeSeries make_workload(const ExampleDataSpec& spec, int hours) {
    constexpr std::int64_t kStep = 300;
    const auto n = static_cast<std::size_t>(hours * 3600 / kStep);
    std::vector<double> v(n);
    std::mt19937_64 rng(spec.seed * 7919 + 11);
    std::uniform_real_distribution<double> jitter(-0.01, 0.01);
    for (std::size_t i = 0; i < n; ++i) {
        const double t_h = static_cast<double>(i * kStep) / 3600.0;
        const double day_scale = 1.0 + 0.03 * static_cast<double>(static_cast<int>(t_h / 24.0) % 2);
        const double base = shape_at(kLoadShape, std::fmod(t_h, 24.0));
        v[i] = spec.lambda_peak * day_scale * std::max(base + jitter(rng), 0.05);
    }
    return TimeSeries(spec.start_s, kStep, std::move(v));
}

TimeSeries make_price(const ExampleDataSpec& spec, int hours, const double* table,
                      std::uint64_t salt, double day2_factor) {
    std::vector<double> v(static_cast<std::size_t>(hours));
    std::mt19937_64 rng(spec.seed * 104729 + salt);
    std::uniform_real_distribution<double> jitter(0.92, 1.08);
    for (int h = 0; h < hours; ++h) {
        const double day_scale = (h / 24) % 2 == 1 ? day2_factor : 1.0;
        v[static_cast<std::size_t>(h)] = table[h % 24] * day_scale * jitter(rng);
    }
    return TimeSeries(spec.start_s, 3600, std::move(v));
}

TimeSeries make_wetbulb(const ExampleDataSpec& spec, int hours) {
    std::vector<double> v(static_cast<std::size_t>(hours));
    for (int h = 0; h < hours; ++h) {
        const double hod = static_cast<double>(h % 24);
        v[static_cast<std::size_t>(h)] =
            22.5 + 3.5 * std::sin((hod - 9.0) / 24.0 * 2.0 * 3.14159265358979323846);
    }
    return TimeSeries(spec.start_s, 3600, std::move(v));
}

// Energy-neutral regulation proxy: a sign-alternating telegraph with random
// dwell, low-pass filtered. Alternation keeps the running sum near zero at
// the half-hour scale.
TimeSeries make_telegraph(std::int64_t start_s, int hours, std::uint64_t seed) {
    constexpr std::int64_t kStep = 4;
    const auto n = static_cast<std::size_t>(hours) * 900;
    std::vector<double> v(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dwell_s(100.0, 280.0);
    std::uniform_real_distribution<double> level(0.55, 1.0);
    double sign = rng() % 2 == 0 ? 1.0 : -1.0;
    double target = sign * level(rng);
    double until = dwell_s(rng);
    double y = 0.0;
    const double alpha = static_cast<double>(kStep) / 60.0; // ~60 s filter
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (t >= until) {
            sign = -sign;
            target = sign * level(rng);
            until = t + dwell_s(rng);
        }
        y += alpha * (target - y);
        v[i] = std::clamp(y, -1.0, 1.0);
        t += static_cast<double>(kStep);
    }
    return TimeSeries(start_s, kStep, std::move(v));
}

} // namespace

sim::SimInputs make_example_inputs(const ExampleDataSpec& spec) {
    const int hours = spec.span_hours + spec.forecast_tail_hours;
    sim::SimInputs in;
    in.workload = make_workload(spec, hours);
    in.wetbulb = make_wetbulb(spec, hours);
    in.market.energy_price = make_price(spec, hours, kEnergyPrice, 101, 1.06);
    in.market.regulation_price = make_price(spec, hours, kRegulationPrice, 211, 0.97);
    in.market.reg_signal = make_telegraph(spec.start_s, hours, spec.seed * 31337 + 5);
    in.market.demand_price = 7.48;
    in.regd_hist = make_example_reg_history(spec);
    return in;
}

TimeSeries make_example_reg_history(const ExampleDataSpec& spec) {
    return make_telegraph(spec.start_s, 24, spec.seed * 69061 + 17);
}

void write_example_inputs(const std::string& dir, const ExampleDataSpec& spec) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto in = make_example_inputs(spec);
    save_series_csv(dir + "/workload.csv", in.workload);
    save_series_csv(dir + "/price_energy.csv", in.market.energy_price);
    save_series_csv(dir + "/price_regulation.csv", in.market.regulation_price);
    save_series_csv(dir + "/regd.csv", in.market.reg_signal);
    save_series_csv(dir + "/regd_hist.csv", in.regd_hist.value());
    save_series_csv(dir + "/wetbulb.csv", in.wetbulb);
}

std::string example_config_text() {
    return "; Two-day case-study configuration. Physical parameters follow the\n"
           "; design: 1,982 kW chiller at COP 5.8, a four-hour chilled-water tank,\n"
           "; 16,000 servers, demand charged at 7.48 $/kW on the peak 30-min mean.\n"
           "[run]\n"
           "workload = workload.csv\n"
           "price_energy = price_energy.csv\n"
           "price_regulation = price_regulation.csv\n"
           "regd = regd.csv\n"
           "regd_hist = regd_hist.csv\n"
           "wetbulb = wetbulb.csv\n"
           "start = 2018-07-01T00:00:00\n"
           "hours = 48\n"
           "seed = 1\n"
           "scenario = OPBL_MM\n"
           "\n"
           "[market]\n"
           "demand_price = 7.48\n"
           "demand_limit_bl_kw = 2148\n"
           "demand_limit_opbl_kw = 1990\n"
           "\n"
           "[servers]\n"
           "n_total = 16000\n"
           "k = 50\n"
           "gamma = 1.5\n"
           "beta = 1.1\n"
           "response_cap_s = 0.033\n"
           "\n"
           "[chiller]\n"
           "capacity_kw = 1982\n"
           "cop = 5.8\n"
           "tau_s = 300\n"
           "min_load_frac = 0.05\n"
           "\n"
           "[tank]\n"
           "n_volumes = 10\n"
           "hours_at_nominal = 4\n"
           "t_top_c = 12\n"
           "t_bottom_c = 5\n"
           "initial_soc = 0.5\n"
           "mdot_max_kgps = 52.6\n"
           "\n"
           "[room]\n"
           "setpoint_c = 25\n"
           "band_k = 3\n"
           "; nominal cooling imbalance moves the room 1 K per 5 minutes\n"
           "capacitance_kj_per_k = 594600\n"
           "\n"
           "[scheduling]\n"
           "horizon_h = 12\n"
           "soc_min = 0.05\n"
           "soc_max = 0.95\n"
           "onpeak_start = 11\n"
           "onpeak_end = 19\n"
           "\n"
           "[tracking]\n"
           "; zero selects gain scheduling from the hourly power slope\n"
           "pid_kp = 0\n"
           "pid_ki = 0\n"
           "pid_kd = 0\n";
}

} // namespace dcgridsim::io
