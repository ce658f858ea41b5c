#pragma once

#include <cstdint>
#include <vector>

#include "jdhedge/jump_law.hpp"

namespace jdhedge {

// Jump-diffusion model dS/S = mu dt + sigma dW + dJ with compound Poisson J.
// Time is measured in months; mu and lambda are per month, sigma per
// sqrt(month).
struct ModelParams {
    double mu = 0.0;
    double sigma = 0.0;
    double lambda = 0.0;
    JumpLaw jump = JumpLaw::constant(0.0);
    double s0 = 0.0;

    // Throws std::invalid_argument on sigma <= 0, lambda < 0, s0 <= 0 or
    // non-finite fields.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

// Transaction times t_0 < t_1 < ... < t_N = T with t_0 = 0.
class RebalanceGrid {
public:
    explicit RebalanceGrid(std::vector<double> times);
    static RebalanceGrid uniform(double horizon, int n_intervals);

    const std::vector<double>& times() const noexcept { return times_; }
    int n_intervals() const noexcept { return static_cast<int>(times_.size()) - 1; }
    double horizon() const noexcept { return times_.back(); }
    double dt(int i) const { return times_.at(i + 1) - times_.at(i); }

private:
    std::vector<double> times_;
};

struct JumpEvent {
    double time;
    double size;
};

// One coupled sample path: the jump-diffusion price s and its geometric
// Brownian shadow s_bs share the same Brownian path w; they differ only by
// the accumulated jump product.
struct SamplePath {
    std::vector<double> times;  // fine grid; contains every rebalance date
    std::vector<double> w;
    std::vector<int> n_count;   // Poisson count N_t per grid point
    std::vector<double> s;
    std::vector<double> s_bs;
    std::vector<JumpEvent> jumps;
    int refinement = 1;
    std::uint64_t seed = 0;

    // Fine-grid index of rebalance date i.
    int rebalance_index(int i) const noexcept { return i * refinement; }
};

// Exact simulation: Gaussian increments per sub-step, Poisson jump counts with
// i.i.d. marks, jump times placed strictly inside sub-steps so rebalance dates
// carry no jump atom. Prices come from the pathwise solution, not a scheme.
// Deterministic in (params, grid, refinement, seed).
SamplePath simulate_path(const ModelParams& params, const RebalanceGrid& grid,
                         int refinement, std::uint64_t seed);

// E[S_{u+dt}^k | S_u = s_u]:
//   s_u^k * exp[(k mu + k(k-1) sigma^2/2 + lambda * sum_{j=1..k} C(k,j) eps_j) dt],
// or with the lambda term dropped when with_jumps is false (shadow gBm moment).
double conditional_moment(const ModelParams& params, double s_u, int k, double dt,
                          bool with_jumps);

}  // namespace jdhedge
