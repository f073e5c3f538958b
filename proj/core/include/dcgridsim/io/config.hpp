#pragma once

#include "dcgridsim/sim/scenario.hpp"

#include <string>

namespace dcgridsim::io {

/// What a run needs before any simulation starts: the input files, the
/// output target, the scenario selection and the feature flags.
struct RunManifest {
    std::string workload_path;
    std::string price_energy_path;
    std::string price_regulation_path;
    std::string regd_path;
    std::string wetbulb_path;
    std::string regd_hist_path; ///< optional seed trace for day-1 predictions
    std::string out_dir = "runs";
    std::string scenario = "OPBL_MM"; ///< BL, BL_MM, OPBL_MM or all
    std::int64_t start_s = 0;
    int hours = 48;
    std::uint64_t seed = 1;
    bool cop_derate = false;
    bool reduced_order_rollout = false;
};

struct FullConfig {
    RunManifest manifest;
    sim::SystemSetup setup;
    double demand_price = 7.48;
    double demand_limit_bl_kw = 2148.0;
    double demand_limit_opbl_kw = 1990.0;
};

/// Parse the INI-style declarative config. Unknown sections or keys are
/// rejected; omitted physical parameters fall back to the case-study
/// defaults; missing input paths or inconsistent bounds raise.
FullConfig parse_config(const std::string& text);

/// Canonical rendering; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const FullConfig& c);

/// Load from disk; relative input paths resolve against the config's
/// directory.
FullConfig load_config(const std::string& path);

/// All series loaded and validated against the run span.
sim::SimInputs load_inputs(const FullConfig& c);

} // namespace dcgridsim::io
