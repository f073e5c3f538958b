#pragma once

namespace dcgridsim::plant {

/// Server-aggregator model parameters. Power-curve coefficients are in
/// watts on a per-(request/s) basis for b0..b2 and absolute watts for c0/c1.
struct AggregatorParams {
    double b0 = 0.016;
    double b1 = 1.60;
    double b2 = 0.14;
    double c0 = 0.01;
    double c1 = 120.92;
    double service_rate_k = 50.0;   ///< requests/s one server handles at frequency 1
    double arrival_cv = 1.0;        ///< C_A, arrival-time variability coefficient
    double service_cv = 1.0;        ///< C_B, service-time variability coefficient
    int n_servers_total = 16000;    ///< installed fleet size
    double design_redundancy = 1.5; ///< gamma, > 1
    double fr_flexibility = 1.1;    ///< beta, >= 1
    double response_cap_s = 0.033;  ///< QoS cap on mean response time
    double freq_max = 1.0;

    void validate() const;
};

/// Queueing chain evaluated at one operating point.
struct QueueMetrics {
    double service_rate;  ///< mu = k*f, requests/s per server
    double utilization;   ///< rho
    double queue_prob;    ///< Pr, probability an arriving job waits
    double service_time_s;
    double wait_time_s;
    double response_time_s;
};

/// Aggregated server power in watts:
/// lambda*(b0 + b1*f + b2*f^2) + c0 + c1*n_active.
double aggregator_power(double lambda, double freq, double n_active, const AggregatorParams& p);

/// GI/G/m response-time chain. Throws if the operating point is unstable
/// (utilization >= 1) or outside the model's domain.
QueueMetrics response_time(double lambda, double freq, int n_active, const AggregatorParams& p);

/// Response time as a function of utilization alone at fixed lambda and
/// n_active: t_r(rho) = rho/lambda * [N + (C_A^2+C_B^2)/(2(1-rho)) * Pr(rho)].
double response_time_at_utilization(double rho, double lambda, int n_active,
                                    const AggregatorParams& p);

/// Servers reject all input power as heat; watts in, kW thermal out.
double cooling_load(double p_agg_w);

} // namespace dcgridsim::plant
