#include "dcgridsim/plant/aggregator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dcgridsim::plant {

void AggregatorParams::validate() const {
    if (!(b1 > 0.0) || !(b2 > 0.0) || !(c1 > 0.0))
        throw std::invalid_argument("aggregator: b1, b2, c1 must be positive");
    if (!(design_redundancy > 1.0))
        throw std::invalid_argument("aggregator: design redundancy gamma must exceed 1");
    if (!(fr_flexibility >= 1.0))
        throw std::invalid_argument("aggregator: flexibility beta must be >= 1");
    if (!(service_rate_k > 0.0))
        throw std::invalid_argument("aggregator: service rate k must be positive");
    if (!(response_cap_s > 0.0))
        throw std::invalid_argument("aggregator: response-time cap must be positive");
    if (n_servers_total < 0)
        throw std::invalid_argument("aggregator: negative fleet size");
}

double aggregator_power(double lambda, double freq, double n_active, const AggregatorParams& p) {
    if (lambda < 0.0) throw std::invalid_argument("aggregator_power: negative workload");
    if (n_active < 0.0) throw std::invalid_argument("aggregator_power: negative server count");
    if (freq < 0.0 || freq > p.freq_max)
        throw std::invalid_argument("aggregator_power: frequency outside [0, f_max]");
    return lambda * (p.b0 + p.b1 * freq + p.b2 * freq * freq) + p.c0 + p.c1 * n_active;
}

namespace {

double queue_probability(double rho, int n_active) {
    if (rho >= 0.7)
        return (std::pow(rho, n_active) + rho) / 2.0;
    return std::pow(rho, (static_cast<double>(n_active) + 1.0) / 2.0);
}

} // namespace

QueueMetrics response_time(double lambda, double freq, int n_active, const AggregatorParams& p) {
    if (n_active < 1) throw std::invalid_argument("response_time: need at least one active server");
    if (!(freq > 0.0)) throw std::invalid_argument("response_time: frequency must be positive");
    if (lambda < 0.0) throw std::invalid_argument("response_time: negative workload");

    QueueMetrics m{};
    m.service_rate = p.service_rate_k * freq;
    m.utilization = lambda / (static_cast<double>(n_active) * m.service_rate);
    if (m.utilization >= 1.0)
        throw std::runtime_error("response_time: unstable, utilization " +
                                 std::to_string(m.utilization) + " >= 1 (service capability must exceed workload)");
    m.queue_prob = queue_probability(m.utilization, n_active);
    m.service_time_s = 1.0 / m.service_rate;
    const double cv2 = p.arrival_cv * p.arrival_cv + p.service_cv * p.service_cv;
    m.wait_time_s = cv2 / (2.0 * static_cast<double>(n_active)) * m.queue_prob /
                    (m.service_rate * (1.0 - m.utilization));
    m.response_time_s = m.service_time_s + m.wait_time_s;
    return m;
}

double response_time_at_utilization(double rho, double lambda, int n_active,
                                    const AggregatorParams& p) {
    if (!(rho > 0.0) || rho >= 1.0)
        throw std::invalid_argument("response_time_at_utilization: rho outside (0,1)");
    if (!(lambda > 0.0)) throw std::invalid_argument("response_time_at_utilization: lambda must be positive");
    if (n_active < 1) throw std::invalid_argument("response_time_at_utilization: need active servers");
    const double cv2 = p.arrival_cv * p.arrival_cv + p.service_cv * p.service_cv;
    return rho / lambda *
           (static_cast<double>(n_active) + cv2 / (2.0 * (1.0 - rho)) * queue_probability(rho, n_active));
}

double cooling_load(double p_agg_w) {
    if (p_agg_w < 0.0) throw std::invalid_argument("cooling_load: negative power");
    return p_agg_w / 1000.0;
}

} // namespace dcgridsim::plant
