#include "dcgridsim/io/config.hpp"
#include "dcgridsim/io/example_data.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace dcgridsim;
using namespace dcgridsim::io;

namespace {

std::string minimal_config() {
    return "[run]\n"
           "workload = w.csv\n"
           "price_energy = pe.csv\n"
           "price_regulation = pr.csv\n"
           "regd = r.csv\n"
           "wetbulb = wb.csv\n";
}

} // namespace

TEST_CASE("defaults reproduce the case-study parameters") {
    const auto c = parse_config(minimal_config());
    CHECK(c.setup.chiller_capacity_kw == doctest::Approx(1982.0));
    CHECK(c.setup.chiller_cop == doctest::Approx(5.8));
    CHECK(c.setup.tank_capacity_kj == doctest::Approx(1982.0 * 4 * 3600));
    CHECK(c.setup.params.servers.n_servers_total == 16000);
    CHECK(c.demand_price == doctest::Approx(7.48));
    CHECK(c.setup.params.limits.chiller_min_kw == doctest::Approx(99.1));
    CHECK(c.setup.params.limits.charge_max_kw ==
          doctest::Approx(52.6 * 4.186 * 7.0)); // transfer pump at nominal spread
    CHECK(c.setup.sched.horizon_h == 12);
    CHECK(c.setup.sched.soc_min == doctest::Approx(0.05));
    CHECK(c.setup.sched.soc_max == doctest::Approx(0.95));
}

TEST_CASE("empty config lists every missing series") {
    try {
        parse_config("");
        FAIL("expected a validation error");
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        CHECK(msg.find("run.workload") != std::string::npos);
        CHECK(msg.find("run.price_energy") != std::string::npos);
        CHECK(msg.find("run.regd") != std::string::npos);
        CHECK(msg.find("run.wetbulb") != std::string::npos);
    }
}

TEST_CASE("inverted soc bounds are rejected") {
    const std::string text = minimal_config() + "[scheduling]\nsoc_min = 0.95\nsoc_max = 0.05\n";
    CHECK_THROWS(parse_config(text));
}

TEST_CASE("unknown keys and sections are rejected") {
    CHECK_THROWS(parse_config(minimal_config() + "[servers]\nwarp_drive = 9\n"));
    CHECK_THROWS(parse_config(minimal_config() + "[starship]\nx = 1\n"));
}

TEST_CASE("config round trip is the identity") {
    auto c = parse_config(minimal_config());
    c.manifest.scenario = "BL_MM";
    c.manifest.seed = 99;
    c.manifest.hours = 24;
    c.manifest.cop_derate = true;
    c.setup.params.servers.service_rate_k = 73.5;
    c.setup.sched.penalty_soc = 1234.0;
    c.setup.pid.kp = 2e-4;
    c.demand_limit_opbl_kw = 1991.5;
    c.setup.params.cop_derate_enabled = true; // follows the manifest flag

    const auto back = parse_config(serialize_config(c));
    CHECK(back.manifest.scenario == c.manifest.scenario);
    CHECK(back.manifest.seed == c.manifest.seed);
    CHECK(back.manifest.hours == c.manifest.hours);
    CHECK(back.manifest.cop_derate == c.manifest.cop_derate);
    CHECK(back.manifest.start_s == c.manifest.start_s);
    CHECK(back.setup.params.servers.service_rate_k ==
          doctest::Approx(c.setup.params.servers.service_rate_k));
    CHECK(back.setup.sched.penalty_soc == doctest::Approx(c.setup.sched.penalty_soc));
    CHECK(back.setup.pid.kp == doctest::Approx(c.setup.pid.kp));
    CHECK(back.demand_limit_opbl_kw == doctest::Approx(c.demand_limit_opbl_kw));
    CHECK(back.setup.params.cop_derate_enabled == c.setup.params.cop_derate_enabled);
    // canonical form is a fixed point
    CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("example data generator is deterministic and loadable") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "dcgridsim_example_data";
    fs::remove_all(dir);
    ExampleDataSpec spec;
    spec.span_hours = 2;
    spec.forecast_tail_hours = 1;
    write_example_inputs(dir.string(), spec);

    const auto a = load_series_csv((dir / "workload.csv").string());
    CHECK(a.covers(spec.start_s, spec.start_s + 3 * 3600));

    const auto mem = make_example_inputs(spec);
    CHECK(a.size() == mem.workload.size());
    for (std::size_t i = 0; i < a.size(); i += 7)
        CHECK(a[i] == doctest::Approx(mem.workload[i]).epsilon(1e-5)); // 6-digit CSV
    const auto regd = load_series_csv((dir / "regd.csv").string());
    for (double v : regd.values()) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
    fs::remove_all(dir);
}

TEST_CASE("shipped example config parses against generated data") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "dcgridsim_example_cfg";
    fs::remove_all(dir);
    ExampleDataSpec spec;
    spec.span_hours = 2;
    spec.forecast_tail_hours = 1;
    write_example_inputs(dir.string(), spec);
    {
        std::ofstream out(dir / "example.ini");
        out << example_config_text();
    }
    const auto c = load_config((dir / "example.ini").string());
    CHECK(c.setup.chiller_capacity_kw == doctest::Approx(1982.0));
    CHECK(c.setup.params.servers.n_servers_total == 16000);
    const auto inputs = load_inputs(c);
    CHECK(inputs.workload.covers(spec.start_s, spec.start_s + 3600));
    CHECK(inputs.regd_hist.has_value());
    fs::remove_all(dir);
}
