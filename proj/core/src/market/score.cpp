#include "dcgridsim/market/score.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dcgridsim::market {

namespace {

constexpr std::int64_t kSamplePeriodS = 10;
constexpr std::int64_t kMaxDelayS = 300;
constexpr double kMeanEps = 1e-9;

// Pearson correlation of x[0..m) against y[0..m); 0 if either side is flat.
double correlation(const double* x, const double* y, std::size_t m) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

} // namespace

ScoreBreakdown performance_score(const TimeSeries& reg_in, const TimeSeries& res_in) {
    if (reg_in.start_s() != res_in.start_s() || reg_in.end_s() != res_in.end_s())
        throw std::invalid_argument("performance_score: series spans differ");
    if (reg_in.end_s() - reg_in.start_s() != 3600)
        throw std::invalid_argument("performance_score: expected a one-hour span");

    const TimeSeries reg = reg_in.resample_hold(kSamplePeriodS);
    const TimeSeries res = res_in.resample_hold(kSamplePeriodS);
    const std::size_t n = reg.size();
    const auto& rg = reg.values();
    const auto& rs = res.values();

    ScoreBreakdown sb{};
    const std::size_t max_shift = static_cast<std::size_t>(kMaxDelayS / kSamplePeriodS);
    double best = -2.0;
    std::size_t best_shift = 0;
    for (std::size_t sh = 0; sh <= max_shift; ++sh) {
        // response delayed by sh samples, regulation truncated to match
        const std::size_t m = n - sh;
        const double c = correlation(rg.data(), rs.data() + sh, m);
        if (c > best) {
            best = c;
            best_shift = sh;
        }
    }
    // A flat signal on either side makes every correlation 0, so the argmax
    // lands on shift 0 and accuracy clamps to 0, as documented.
    sb.accuracy = std::clamp(best, 0.0, 1.0);
    sb.delay_at_max_s = static_cast<double>(best_shift) * kSamplePeriodS;
    sb.delay = std::abs((static_cast<double>(kMaxDelayS) - sb.delay_at_max_s) /
                        static_cast<double>(kMaxDelayS));

    double mean = 0.0, mean_abs = 0.0;
    for (double v : rg) {
        mean += v;
        mean_abs += std::abs(v);
    }
    mean /= static_cast<double>(n);
    mean_abs /= static_cast<double>(n);
    double denom = std::abs(mean) >= kMeanEps ? std::abs(mean) : mean_abs;
    double abs_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) abs_err += std::abs(rs[i] - rg[i]);
    abs_err /= static_cast<double>(n);
    double precision;
    if (denom < 1e-12)
        precision = abs_err == 0.0 ? 1.0 : 0.0;
    else
        precision = 1.0 - abs_err / denom;
    sb.precision = std::clamp(precision, 0.0, 1.0);

    sb.composite = (sb.accuracy + sb.delay + sb.precision) / 3.0;
    return sb;
}

} // namespace dcgridsim::market
