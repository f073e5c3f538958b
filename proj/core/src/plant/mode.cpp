#include "dcgridsim/plant/mode.hpp"

#include <stdexcept>

namespace dcgridsim::plant {

const char* mode_name(OperatingMode m) {
    switch (m) {
    case OperatingMode::ChargeWhileMeetingLoad: return "M1";
    case OperatingMode::StorageOnly: return "M2";
    case OperatingMode::StorageAndChiller: return "M3";
    case OperatingMode::ChillerOnly: return "M4";
    }
    return "?";
}

OperatingMode staging_predicate(double u_c, double u_s, const CoolingLimits& lims, bool& matched) {
    matched = true;
    const bool chiller_in_range = u_c >= lims.chiller_min_kw && u_c <= lims.chiller_max_kw;
    const bool chiller_below_min = u_c >= 0.0 && u_c < lims.chiller_min_kw;

    if (chiller_in_range && u_s > 0.0 && u_s <= lims.charge_max_kw)
        return OperatingMode::ChargeWhileMeetingLoad;
    if (chiller_below_min && u_s >= lims.charge_min_kw && u_s < 0.0)
        return OperatingMode::StorageOnly;
    if (chiller_in_range && u_s >= lims.charge_min_kw && u_s < 0.0)
        return OperatingMode::StorageAndChiller;
    if (chiller_in_range && u_s == 0.0)
        return OperatingMode::ChillerOnly;

    matched = false;
    return OperatingMode::ChillerOnly;
}

ModeStepResult mode_transition(const ModeStaging& st, double u_c, double u_s,
                               const CoolingLimits& lims, double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("mode_transition: dt must be positive");

    ModeStepResult r{st, false};
    bool matched = false;
    const OperatingMode wanted = staging_predicate(u_c, u_s, lims, matched);
    if (!matched) {
        // setpoint pair matches no staging condition: hold the current mode
        r.staging.candidate = st.mode;
        r.staging.candidate_elapsed_s = 0.0;
        r.unmatched_setpoints = true;
        return r;
    }
    if (wanted == st.mode) {
        r.staging.candidate = st.mode;
        r.staging.candidate_elapsed_s = 0.0;
        return r;
    }
    if (wanted == st.candidate) {
        r.staging.candidate_elapsed_s = st.candidate_elapsed_s + dt_s;
    } else {
        r.staging.candidate = wanted;
        r.staging.candidate_elapsed_s = dt_s;
    }
    if (r.staging.candidate_elapsed_s >= st.delay_s) {
        r.staging.mode = wanted;
        r.staging.candidate = wanted;
        r.staging.candidate_elapsed_s = 0.0;
    }
    return r;
}

} // namespace dcgridsim::plant
