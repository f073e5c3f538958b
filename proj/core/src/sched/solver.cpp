#include "dcgridsim/sched/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace dcgridsim::sched {

SolveResult solve_trajectory(const Objective& objective, const std::vector<Box>& bounds,
                             const std::vector<std::vector<double>>& starts,
                             const SolveOptions& opts) {
    const std::size_t dim = bounds.size();
    if (dim == 0) throw std::invalid_argument("solve_trajectory: empty bounds");
    for (const auto& b : bounds)
        if (!(b.lo <= b.hi)) throw std::invalid_argument("solve_trajectory: inverted box");
    if (starts.empty()) throw std::invalid_argument("solve_trajectory: need at least one start");

    SolveResult best;
    best.objective = std::numeric_limits<double>::infinity();
    int evals = 0;
    bool budget_ok = true;

    const auto clamp_point = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < dim; ++i) x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
    };
    const auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return objective(x);
    };

    std::mt19937_64 rng(opts.seed);
    std::vector<std::size_t> order(dim);
    for (std::size_t i = 0; i < dim; ++i) order[i] = i;

    for (const auto& start_raw : starts) {
        if (start_raw.size() != dim)
            throw std::invalid_argument("solve_trajectory: start dimension mismatch");
        if (!budget_ok) break;

        std::vector<double> x = start_raw;
        clamp_point(x);
        double fx = eval(x);

        std::vector<double> step(dim);
        for (std::size_t i = 0; i < dim; ++i)
            step[i] = opts.step_init_frac * std::max(bounds[i].hi - bounds[i].lo, 0.0);

        bool converged_here = false;
        while (budget_ok) {
            std::shuffle(order.begin(), order.end(), rng);
            bool improved = false;
            for (std::size_t oi = 0; oi < dim && budget_ok; ++oi) {
                const std::size_t i = order[oi];
                if (step[i] <= 0.0) continue;
                for (const double dir : {+1.0, -1.0}) {
                    if (evals >= opts.max_evals) {
                        budget_ok = false;
                        break;
                    }
                    const double xi = x[i];
                    const double cand = std::clamp(xi + dir * step[i], bounds[i].lo, bounds[i].hi);
                    if (cand == xi) continue;
                    x[i] = cand;
                    const double fc = eval(x);
                    if (fc < fx) {
                        fx = fc;
                        improved = true;
                        // keep walking the profitable direction
                        while (evals < opts.max_evals) {
                            const double next =
                                std::clamp(x[i] + dir * step[i], bounds[i].lo, bounds[i].hi);
                            if (next == x[i]) break;
                            const double prev = x[i];
                            x[i] = next;
                            const double fn = eval(x);
                            if (fn < fx) {
                                fx = fn;
                            } else {
                                x[i] = prev;
                                break;
                            }
                        }
                        break; // next coordinate
                    }
                    x[i] = xi;
                }
            }
            if (!budget_ok) break;
            if (!improved) {
                // coordinate moves alone stall in diagonal valleys; probe a
                // few random directions at the current step before shrinking
                std::normal_distribution<double> gauss(0.0, 1.0);
                for (int probe = 0; probe < static_cast<int>(2 * dim) && !improved; ++probe) {
                    if (evals >= opts.max_evals) {
                        budget_ok = false;
                        break;
                    }
                    std::vector<double> cand = x;
                    for (std::size_t i = 0; i < dim; ++i)
                        cand[i] = std::clamp(x[i] + gauss(rng) * step[i], bounds[i].lo,
                                             bounds[i].hi);
                    if (cand == x) continue;
                    const double fc = eval(cand);
                    if (fc < fx) {
                        // walk the discovered direction while it pays off
                        std::vector<double> dirstep(dim);
                        for (std::size_t i = 0; i < dim; ++i) dirstep[i] = cand[i] - x[i];
                        x = cand;
                        fx = fc;
                        improved = true;
                        while (evals < opts.max_evals) {
                            std::vector<double> further = x;
                            for (std::size_t i = 0; i < dim; ++i)
                                further[i] = std::clamp(x[i] + dirstep[i], bounds[i].lo,
                                                        bounds[i].hi);
                            if (further == x) break;
                            const double ff = eval(further);
                            if (ff < fx) {
                                x = further;
                                fx = ff;
                            } else {
                                break;
                            }
                        }
                    }
                }
            }
            if (!budget_ok) break;
            if (!improved) {
                bool any_above_tol = false;
                for (std::size_t i = 0; i < dim; ++i) {
                    step[i] *= 0.5;
                    const double width = std::max(bounds[i].hi - bounds[i].lo, 0.0);
                    if (step[i] > opts.step_tol_frac * width && width > 0.0) any_above_tol = true;
                }
                if (!any_above_tol) {
                    converged_here = true;
                    break;
                }
            }
        }

        if (fx < best.objective) {
            best.objective = fx;
            best.x = x;
            best.converged = converged_here;
        }
    }
    best.evals = evals;
    return best;
}

} // namespace dcgridsim::sched
