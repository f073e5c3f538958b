#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace dcgridsim::sched {

struct Box {
    double lo;
    double hi;
};

struct SolveOptions {
    int max_evals = 4000;
    double step_init_frac = 0.25; ///< initial step as a fraction of the box width
    double step_tol_frac = 1e-3;  ///< convergence once every step shrinks below this
    std::uint64_t seed = 0;       ///< drives the per-pass coordinate ordering
};

struct SolveResult {
    std::vector<double> x;
    double objective = 0.0;
    bool converged = false;
    int evals = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Deterministic derivative-free direct search over a box: greedy coordinate
/// moves plus seeded random-direction probes (which rescue diagonal valleys),
/// with geometrically shrinking steps, restarted from each supplied start
/// point. The same seed and inputs reproduce the same trajectory bit for bit.
SolveResult solve_trajectory(const Objective& objective, const std::vector<Box>& bounds,
                             const std::vector<std::vector<double>>& starts,
                             const SolveOptions& opts);

} // namespace dcgridsim::sched
