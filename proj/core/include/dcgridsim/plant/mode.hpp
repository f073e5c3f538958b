#pragma once

namespace dcgridsim::plant {

/// Cooling-plant operating modes.
enum class OperatingMode {
    ChargeWhileMeetingLoad = 1, // M1: chiller serves the load and charges the tank
    StorageOnly = 2,            // M2: chiller off, tank discharge serves the load
    StorageAndChiller = 3,      // M3: chiller and tank discharge share the load
    ChillerOnly = 4             // M4: chiller alone, tank idle
};

const char* mode_name(OperatingMode m);

/// Actuator ranges used by the staging predicates.
struct CoolingLimits {
    double chiller_min_kw = 99.1;
    double chiller_max_kw = 1982.0;
    double charge_min_kw = -1541.285; ///< most negative charging rate (discharge)
    double charge_max_kw = 1541.285;  ///< highest charging rate
};

/// Mode plus the staging timer. A transition fires only once the candidate
/// mode's predicate has held continuously for the delay.
struct ModeStaging {
    OperatingMode mode = OperatingMode::ChillerOnly;
    OperatingMode candidate = OperatingMode::ChillerOnly;
    double candidate_elapsed_s = 0.0;
    double delay_s = 300.0;
};

struct ModeStepResult {
    ModeStaging staging;
    bool unmatched_setpoints = false; ///< no staging predicate matched this step
};

/// Which mode (if any) the setpoint pair selects, before the dwell delay.
/// Returns the current mode unchanged when nothing matches.
OperatingMode staging_predicate(double chiller_setpoint_kw, double charge_setpoint_kw,
                                const CoolingLimits& lims, bool& matched);

/// Advance the staging timer by dt against the given setpoints.
ModeStepResult mode_transition(const ModeStaging& st, double chiller_setpoint_kw,
                               double charge_setpoint_kw, const CoolingLimits& lims, double dt_s);

} // namespace dcgridsim::plant
