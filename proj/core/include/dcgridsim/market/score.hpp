#pragma once

#include "dcgridsim/timeseries.hpp"

namespace dcgridsim::market {

/// PJM composite hourly performance score.
struct ScoreBreakdown {
    double accuracy = 0.0;  ///< best shifted correlation, clamped to [0, 1]
    double delay = 0.0;     ///< |(300 - delta*)/300|
    double precision = 0.0; ///< 1 - mean relative error, clamped to [0, 1]
    double composite = 0.0; ///< mean of the three
    double delay_at_max_s = 0.0; ///< delta*, seconds
};

/// Score one hour of regulation signal against the measured response.
/// Both series must cover the same one-hour span; they are resampled to
/// 10 s by last-value hold, and the response is evaluated at delays of
/// 0..300 s in 10 s increments (31 shifted copies).
///
/// Conventions for degenerate inputs: a constant signal on either side
/// yields accuracy 0 with delta* = 0; a near-zero mean regulation signal
/// switches the precision denominator to the mean absolute value.
ScoreBreakdown performance_score(const TimeSeries& reg, const TimeSeries& res);

} // namespace dcgridsim::market
