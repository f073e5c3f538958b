#pragma once

#include "dcgridsim/sim/scenario.hpp"

#include <string>

namespace dcgridsim::io {

/// Deterministic synthetic two-day inputs shaped like the case study: a
/// diurnal request trace, real-time energy prices with an evening spike,
/// regulation prices, an energy-neutral filtered telegraph signal standing
/// in for the 4-second regulation dispatch, and a wet-bulb trace. The span
/// carries a forecast tail beyond the simulated hours.
struct ExampleDataSpec {
    std::int64_t start_s = 1530403200; ///< 2018-07-01T00:00:00
    int span_hours = 48;
    int forecast_tail_hours = 12;
    std::uint64_t seed = 1;
    double lambda_peak = 330000.0; ///< requests/s at the daily maximum
};

sim::SimInputs make_example_inputs(const ExampleDataSpec& spec);

/// Separate telegraph trace used as the day-1 historical-signal prediction.
TimeSeries make_example_reg_history(const ExampleDataSpec& spec);

/// Write the five input CSVs (plus the seed trace) into dir.
void write_example_inputs(const std::string& dir, const ExampleDataSpec& spec);

/// Shipped example configuration pointing at the generated file names.
std::string example_config_text();

} // namespace dcgridsim::io
