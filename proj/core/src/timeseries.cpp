#include "dcgridsim/timeseries.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dcgridsim {

TimeSeries::TimeSeries(std::int64_t start_s, std::int64_t step_s, std::vector<double> values)
    : start_s_(start_s), step_s_(step_s), values_(std::move(values)) {
    if (step_s_ <= 0) throw std::invalid_argument("TimeSeries: step must be positive");
}

double TimeSeries::at_time(std::int64_t t) const {
    if (t < start_s_ || t >= end_s())
        throw std::out_of_range("TimeSeries: time " + std::to_string(t) + " outside span [" +
                                std::to_string(start_s_) + ", " + std::to_string(end_s()) + ")");
    return values_[static_cast<std::size_t>((t - start_s_) / step_s_)];
}

double TimeSeries::mean_over(std::int64_t t0, std::int64_t t1) const {
    if (t1 <= t0) throw std::invalid_argument("TimeSeries::mean_over: empty window");
    if (!covers(t0, t1)) throw std::out_of_range("TimeSeries::mean_over: window outside span");
    double weighted = 0.0;
    std::int64_t t = t0;
    while (t < t1) {
        const auto idx = static_cast<std::size_t>((t - start_s_) / step_s_);
        const std::int64_t sample_end = start_s_ + step_s_ * static_cast<std::int64_t>(idx + 1);
        const std::int64_t seg_end = sample_end < t1 ? sample_end : t1;
        weighted += values_[idx] * static_cast<double>(seg_end - t);
        t = seg_end;
    }
    return weighted / static_cast<double>(t1 - t0);
}

TimeSeries TimeSeries::slice(std::int64_t t0, std::int64_t t1) const {
    if (!covers(t0, t1)) throw std::out_of_range("TimeSeries::slice: window outside span");
    if ((t0 - start_s_) % step_s_ != 0 || (t1 - start_s_) % step_s_ != 0)
        throw std::invalid_argument("TimeSeries::slice: window not aligned to sample boundaries");
    const auto i0 = static_cast<std::size_t>((t0 - start_s_) / step_s_);
    const auto i1 = static_cast<std::size_t>((t1 - start_s_) / step_s_);
    return TimeSeries(t0, step_s_, std::vector<double>(values_.begin() + i0, values_.begin() + i1));
}

TimeSeries TimeSeries::resample_hold(std::int64_t new_step_s) const {
    if (new_step_s <= 0) throw std::invalid_argument("TimeSeries::resample_hold: bad step");
    const std::int64_t span = end_s() - start_s_;
    const auto n = static_cast<std::size_t>(span / new_step_s);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = at_time(start_s_ + new_step_s * static_cast<std::int64_t>(i));
    return TimeSeries(start_s_, new_step_s, std::move(out));
}

namespace {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

} // namespace

std::int64_t parse_iso8601(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    const int got = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (got < 3 || mo < 1 || mo > 12 || d < 1 || d > 31)
        throw std::invalid_argument("bad ISO-8601 timestamp: '" + text + "'");
    if (got >= 4 && sep != 'T' && sep != ' ')
        throw std::invalid_argument("bad ISO-8601 timestamp: '" + text + "'");
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601(std::int64_t epoch_s) {
    std::int64_t days = epoch_s / 86400;
    std::int64_t sod = epoch_s % 86400;
    if (sod < 0) {
        sod += 86400;
        --days;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", y, m, d,
                  static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60),
                  static_cast<int>(sod % 60));
    return buf;
}

std::string format_csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

TimeSeries load_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty series file: " + path);
    // header may carry a UTF-8 BOM
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,value")
        throw std::runtime_error(path + ": expected header 'timestamp,value', got '" + line + "'");

    std::vector<std::int64_t> times;
    std::vector<double> values;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing comma");
        times.push_back(parse_iso8601(line.substr(0, comma)));
        std::size_t pos = 0;
        const std::string vtext = line.substr(comma + 1);
        double v = std::stod(vtext, &pos);
        if (pos == 0 || !std::isfinite(v))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad value '" + vtext + "'");
        values.push_back(v);
    }
    if (values.size() < 2)
        throw std::runtime_error(path + ": need at least two samples");
    const std::int64_t step = times[1] - times[0];
    if (step <= 0) throw std::runtime_error(path + ": non-increasing timestamps");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] - times[i - 1] != step)
            throw std::runtime_error(path + ": non-uniform spacing at row " + std::to_string(i + 2));
    return TimeSeries(times[0], step, std::move(values));
}

void save_series_csv(const std::string& path, const TimeSeries& ts) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write series file: " + path);
    out << "timestamp,value\n";
    for (std::size_t i = 0; i < ts.size(); ++i)
        out << format_iso8601(ts.start_s() + ts.step_s() * static_cast<std::int64_t>(i)) << ','
            << format_csv_number(ts[i]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace dcgridsim
