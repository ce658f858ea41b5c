#include "jdhedge/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jdhedge {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller, cosine branch only; stateless so the draw count per call is
// fixed regardless of call history.
double standard_normal(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Knuth's product-of-uniforms count; fine for the small per-step means here.
int poisson_count(std::mt19937_64& rng, double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(rng);
    } while (p > limit);
    return k - 1;
}

}  // namespace

void ModelParams::validate() const {
    if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
    if (!std::isfinite(sigma) || sigma <= 0.0)
        throw std::invalid_argument("sigma must be positive");
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw std::invalid_argument("lambda must be nonnegative");
    if (!std::isfinite(s0) || s0 <= 0.0) throw std::invalid_argument("s0 must be positive");
}

RebalanceGrid::RebalanceGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) throw std::invalid_argument("grid needs at least two dates");
    if (times_.front() != 0.0) throw std::invalid_argument("grid must start at 0");
    for (std::size_t i = 0; i + 1 < times_.size(); ++i)
        if (!(times_[i] < times_[i + 1]))
            throw std::invalid_argument("grid dates must be strictly increasing");
    if (!std::isfinite(times_.back()) || times_.back() <= 0.0)
        throw std::invalid_argument("grid horizon must be positive");
}

RebalanceGrid RebalanceGrid::uniform(double horizon, int n_intervals) {
    if (n_intervals < 1) throw std::invalid_argument("grid needs at least one interval");
    if (!(horizon > 0.0)) throw std::invalid_argument("grid horizon must be positive");
    std::vector<double> times(static_cast<std::size_t>(n_intervals) + 1);
    for (int i = 0; i <= n_intervals; ++i)
        times[static_cast<std::size_t>(i)] = horizon * i / n_intervals;
    times.front() = 0.0;
    times.back() = horizon;
    return RebalanceGrid(std::move(times));
}

SamplePath simulate_path(const ModelParams& params, const RebalanceGrid& grid,
                         int refinement, std::uint64_t seed) {
    params.validate();
    if (refinement < 1) throw std::invalid_argument("refinement must be >= 1");

    const auto& dates = grid.times();
    const int n_fine = grid.n_intervals() * refinement;

    SamplePath path;
    path.refinement = refinement;
    path.seed = seed;
    path.times.reserve(static_cast<std::size_t>(n_fine) + 1);
    for (int i = 0; i < grid.n_intervals(); ++i) {
        const double h = grid.dt(i) / refinement;
        for (int j = 0; j < refinement; ++j)
            path.times.push_back(j == 0 ? dates[static_cast<std::size_t>(i)]
                                        : dates[static_cast<std::size_t>(i)] + j * h);
    }
    path.times.push_back(dates.back());

    std::mt19937_64 rng(seed);
    const double half_var = params.mu - 0.5 * params.sigma * params.sigma;

    path.w.assign(path.times.size(), 0.0);
    path.n_count.assign(path.times.size(), 0);
    path.s.assign(path.times.size(), 0.0);
    path.s_bs.assign(path.times.size(), 0.0);

    double w = 0.0;
    double jump_product = 1.0;
    path.s[0] = params.s0;
    path.s_bs[0] = params.s0;

    for (std::size_t k = 1; k < path.times.size(); ++k) {
        const double lo = path.times[k - 1];
        const double hi = path.times[k];
        const double h = hi - lo;

        w += std::sqrt(h) * standard_normal(rng);

        const int m = poisson_count(rng, params.lambda * h);
        if (m > 0) {
            std::vector<JumpEvent> events;
            events.reserve(static_cast<std::size_t>(m));
            for (int j = 0; j < m; ++j) {
                // Strictly interior placement keeps rebalance dates jump-free.
                double u;
                do {
                    u = uniform01(rng);
                } while (u == 0.0);
                events.push_back({lo + u * h, params.jump.sample(rng)});
            }
            std::sort(events.begin(), events.end(),
                      [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
            for (const auto& e : events) {
                jump_product *= 1.0 + e.size;
                path.jumps.push_back(e);
            }
        }

        path.w[k] = w;
        path.n_count[k] = path.n_count[k - 1] + m;
        path.s_bs[k] = params.s0 * std::exp(half_var * hi + params.sigma * w);
        path.s[k] = path.s_bs[k] * jump_product;
    }
    return path;
}

double conditional_moment(const ModelParams& params, double s_u, int k, double dt,
                          bool with_jumps) {
    params.validate();
    if (k < 1) throw std::invalid_argument("conditional_moment: k must be >= 1");
    if (!(s_u > 0.0)) throw std::invalid_argument("conditional_moment: s_u must be positive");
    if (!(dt >= 0.0)) throw std::invalid_argument("conditional_moment: dt must be nonnegative");

    double rate = k * params.mu + 0.5 * k * (k - 1) * params.sigma * params.sigma;
    if (with_jumps) {
        double jump_sum = 0.0;
        double binom = 1.0;  // C(k, j), built multiplicatively
        for (int j = 1; j <= k; ++j) {
            binom = binom * (k - j + 1) / j;
            jump_sum += binom * params.jump.moment(j);
        }
        rate += params.lambda * jump_sum;
    }
    double power = 1.0;
    for (int r = 0; r < k; ++r) power *= s_u;
    return power * std::exp(rate * dt);
}

}  // namespace jdhedge
