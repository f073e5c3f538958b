#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dcgridsim {

/// Uniformly sampled scalar signal. Values are held constant over
/// [sample time, sample time + step), i.e. last-value hold.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(std::int64_t start_s, std::int64_t step_s, std::vector<double> values);

    std::int64_t start_s() const { return start_s_; }
    std::int64_t step_s() const { return step_s_; }
    /// One past the last covered second.
    std::int64_t end_s() const { return start_s_ + step_s_ * static_cast<std::int64_t>(values_.size()); }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Value in effect at time t (last-value hold). t must lie in [start, end).
    double at_time(std::int64_t t) const;
    /// Mean of the underlying signal over [t0, t1), honoring sample boundaries.
    double mean_over(std::int64_t t0, std::int64_t t1) const;
    bool covers(std::int64_t t0, std::int64_t t1) const { return t0 >= start_s_ && t1 <= end_s(); }

    /// Sub-series covering [t0, t1); both must align with sample boundaries.
    TimeSeries slice(std::int64_t t0, std::int64_t t1) const;
    /// Resample to a new step by last-value hold over the same span.
    TimeSeries resample_hold(std::int64_t new_step_s) const;

private:
    std::int64_t start_s_ = 0;
    std::int64_t step_s_ = 1;
    std::vector<double> values_;
};

/// `timestamp,value` CSV with ISO-8601 timestamps and uniform spacing
/// (validated on load).
TimeSeries load_series_csv(const std::string& path);
void save_series_csv(const std::string& path, const TimeSeries& ts);

std::int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(std::int64_t epoch_s);

/// Fixed 6-significant-digit formatting used for all CSV numeric output.
std::string format_csv_number(double v);

} // namespace dcgridsim
