#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "jdhedge/model.hpp"

namespace jdhedge {

// Brute-force verifiers for the closed forms. These sample the raw
// distributions directly (one Gaussian increment plus Poisson-marked jumps
// over the whole horizon) and share no path-construction code with
// simulate_path.

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of E[S_{u+dt}^k | S_u = s_u]. Deterministic in seed;
// accumulation runs in fixed chunk order (65536 samples per chunk, chunk c
// seeded from {seed, c}) so a parallel implementation could not reorder it.
McEstimate mc_conditional_moment(const ModelParams& params, double s_u, int k,
                                 double dt, std::int64_t n, std::uint64_t seed);

// Monte Carlo estimate of E[S_{u+dt} value_fn(S^BS_{u+dt}) | F_u], sampling
// the coupled pair (same Gaussian increment, jumps applied only to S).
McEstimate mc_price_times_value(const ModelParams& params, double s_u, double s_bs_u,
                                double dt, const std::function<double(double)>& value_fn,
                                std::int64_t n, std::uint64_t seed);

// Exhaustive scan of f(x) = a (x - x0)^2 + b |x - x0| + c over
// [x0 - half_range, x0 + half_range]; returns (argmin, value) on the grid.
std::pair<double, double> grid_minimize(double a, double b, double c, double x0,
                                        double half_range, double step);

}  // namespace jdhedge
