#include "jdhedge/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace jdhedge {

namespace {

constexpr std::int64_t kChunk = 65536;

std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(sq);
}

McEstimate finalize(long double sum, long double sum_sq, std::int64_t n, std::uint64_t seed) {
    McEstimate est;
    est.n_samples = n;
    est.seed = seed;
    est.mean = static_cast<double>(sum / n);
    const long double var = (sum_sq - sum * sum / n) / (n - 1);
    est.std_error = static_cast<double>(std::sqrt(std::max<long double>(var, 0.0L) / n));
    return est;
}

void check_mc_inputs(const ModelParams& params, double dt, std::int64_t n) {
    params.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("mc oracle: dt must be positive");
    if (n < 1000) throw std::invalid_argument("mc oracle: n must be >= 1000");
}

}  // namespace

McEstimate mc_conditional_moment(const ModelParams& params, double s_u, int k, double dt,
                                 std::int64_t n, std::uint64_t seed) {
    check_mc_inputs(params, dt, n);
    if (k < 1) throw std::invalid_argument("mc_conditional_moment: k must be >= 1");
    if (!(s_u > 0.0)) throw std::invalid_argument("mc_conditional_moment: s_u must be positive");

    const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
    const double vol = params.sigma * std::sqrt(dt);

    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    std::int64_t done = 0;
    for (std::uint64_t chunk = 0; done < n; ++chunk) {
        std::mt19937_64 rng = chunk_rng(seed, chunk);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::poisson_distribution<int> poisson(params.lambda * dt);
        const std::int64_t batch = std::min(kChunk, n - done);
        for (std::int64_t i = 0; i < batch; ++i) {
            const double z = normal(rng);
            double product = 1.0;
            if (params.lambda > 0.0) {
                const int jumps = poisson(rng);
                for (int j = 0; j < jumps; ++j) product *= 1.0 + params.jump.sample(rng);
            }
            const double s_t = s_u * std::exp(drift + vol * z) * product;
            double value = 1.0;
            for (int r = 0; r < k; ++r) value *= s_t;
            if (!std::isfinite(value))
                throw std::runtime_error("mc_conditional_moment: non-finite sample");
            sum += value;
            sum_sq += static_cast<long double>(value) * value;
        }
        done += batch;
    }
    return finalize(sum, sum_sq, n, seed);
}

McEstimate mc_price_times_value(const ModelParams& params, double s_u, double s_bs_u,
                                double dt, const std::function<double(double)>& value_fn,
                                std::int64_t n, std::uint64_t seed) {
    check_mc_inputs(params, dt, n);
    if (!(s_u > 0.0) || !(s_bs_u > 0.0))
        throw std::invalid_argument("mc_price_times_value: prices must be positive");
    if (!value_fn) throw std::invalid_argument("mc_price_times_value: value_fn must be callable");

    const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
    const double vol = params.sigma * std::sqrt(dt);

    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    std::int64_t done = 0;
    for (std::uint64_t chunk = 0; done < n; ++chunk) {
        std::mt19937_64 rng = chunk_rng(seed, chunk);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::poisson_distribution<int> poisson(params.lambda * dt);
        const std::int64_t batch = std::min(kChunk, n - done);
        for (std::int64_t i = 0; i < batch; ++i) {
            const double z = normal(rng);
            const double common = std::exp(drift + vol * z);
            double product = 1.0;
            if (params.lambda > 0.0) {
                const int jumps = poisson(rng);
                for (int j = 0; j < jumps; ++j) product *= 1.0 + params.jump.sample(rng);
            }
            const double value = s_u * common * product * value_fn(s_bs_u * common);
            if (!std::isfinite(value))
                throw std::runtime_error("mc_price_times_value: non-finite sample");
            sum += value;
            sum_sq += static_cast<long double>(value) * value;
        }
        done += batch;
    }
    return finalize(sum, sum_sq, n, seed);
}

std::pair<double, double> grid_minimize(double a, double b, double c, double x0,
                                        double half_range, double step) {
    if (!(a > 0.0)) throw std::invalid_argument("grid_minimize: a must be positive");
    if (!(step > 0.0) || !(half_range > 0.0))
        throw std::invalid_argument("grid_minimize: step and half_range must be positive");
    auto f = [&](double x) {
        const double d = x - x0;
        return a * d * d + b * std::abs(d) + c;
    };
    const auto points = static_cast<std::int64_t>(std::floor(2.0 * half_range / step)) + 1;
    double best_x = x0 - half_range;
    double best_f = f(best_x);
    for (std::int64_t i = 1; i < points; ++i) {
        const double x = x0 - half_range + static_cast<double>(i) * step;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    return {best_x, best_f};
}

}  // namespace jdhedge
