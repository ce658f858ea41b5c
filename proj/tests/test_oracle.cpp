#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "jdhedge/black_scholes.hpp"
#include "jdhedge/hedging.hpp"
#include "jdhedge/oracle.hpp"

using namespace jdhedge;

namespace {

ModelParams experiment_params(double xi) {
    ModelParams p;
    p.mu = 0.15;
    p.sigma = 0.25;
    p.lambda = 0.3;
    p.jump = JumpLaw::constant(xi);
    p.s0 = 100.0;
    return p;
}

}  // namespace

TEST_CASE("mc_conditional_moment is deterministic in the seed") {
    const ModelParams p = experiment_params(-0.5);
    const McEstimate a = mc_conditional_moment(p, 100.0, 2, 1.0, 50000, 7);
    const McEstimate b = mc_conditional_moment(p, 100.0, 2, 1.0, 50000, 7);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.n_samples == 50000);
    const McEstimate c = mc_conditional_moment(p, 100.0, 2, 1.0, 50000, 8);
    CHECK(a.mean != c.mean);
}

TEST_CASE("degenerate randomness pins the estimate") {
    ModelParams p = experiment_params(-0.5);
    p.lambda = 0.0;
    p.sigma = 1e-12;
    for (int k = 1; k <= 2; ++k) {
        const McEstimate est = mc_conditional_moment(p, 50.0, k, 2.0, 2000, 1);
        double expected = 1.0;
        for (int r = 0; r < k; ++r) expected *= 50.0 * std::exp(p.mu * 2.0);
        CHECK(est.mean == doctest::Approx(expected).epsilon(1e-9));
        CHECK(est.std_error <= 1e-6 * std::abs(est.mean));
    }
}

TEST_CASE("estimates agree with the closed forms within three standard errors") {
    const ModelParams p = experiment_params(-0.5);
    SUBCASE("second conditional moment") {
        const double closed = conditional_moment(p, 100.0, 2, 1.0, true);
        const McEstimate est = mc_conditional_moment(p, 100.0, 2, 1.0, 200000, 99);
        CHECK(std::abs(est.mean - closed) <= 3.0 * est.std_error);
    }
    SUBCASE("unit value function reproduces the conditional mean") {
        const double closed = conditional_moment(p, 60.0, 1, 2.0, true);
        const McEstimate est = mc_price_times_value(p, 60.0, 120.0, 2.0,
                                                    [](double) { return 1.0; }, 200000, 5);
        CHECK(std::abs(est.mean - closed) <= 3.0 * est.std_error);
    }
    SUBCASE("lambda = 0 identity value function has an analytic reduction") {
        ModelParams flat = p;
        flat.lambda = 0.0;
        const double expected =
            60.0 * 120.0 * std::exp((2.0 * flat.mu + flat.sigma * flat.sigma) * 2.0);
        const McEstimate est = mc_price_times_value(flat, 60.0, 120.0, 2.0,
                                                    [](double x) { return x; }, 200000, 6);
        CHECK(std::abs(est.mean - expected) <= 3.0 * est.std_error);
    }
    SUBCASE("call value function cross-checks the closed-form conditional gain") {
        const double closed = ell_call_closed(p, 50.0, 100.0, 100.0, 0.0, 2.0, 12.0);
        const McEstimate est = mc_price_times_value(
            p, 50.0, 100.0, 2.0,
            [&](double x) { return call_price(x, 100.0, p.sigma, 10.0); }, 200000, 12);
        CHECK(std::abs(est.mean - closed) <= 3.0 * est.std_error);
    }
}

TEST_CASE("direct sampling confirms the Gaussian-Phi closed form") {
    // A bare-hands estimator, independent of both the quadrature and the
    // closed form: draw Z ~ N(mean, variance), average e^{alpha Z} Phi(aZ+b).
    std::mt19937_64 rng(915);
    std::uniform_real_distribution<double> box(-1.5, 1.5);
    std::uniform_real_distribution<double> var_dist(0.1, 2.0);
    for (int tuple = 0; tuple < 5; ++tuple) {
        const double alpha = box(rng);
        const double a = box(rng);
        const double b = box(rng);
        const double mean = box(rng);
        const double variance = var_dist(rng);
        const double closed = normal_phi_product_expectation(alpha, a, b, mean, variance);

        std::mt19937_64 sampler(1000 + static_cast<std::uint64_t>(tuple));
        std::normal_distribution<double> normal(mean, std::sqrt(variance));
        const int n = 200000;
        long double sum = 0.0L;
        long double sum_sq = 0.0L;
        for (int i = 0; i < n; ++i) {
            const double z = normal(sampler);
            const double x = std::exp(alpha * z) * normal_cdf(a * z + b);
            sum += x;
            sum_sq += static_cast<long double>(x) * x;
        }
        const double mc = static_cast<double>(sum / n);
        const double se = std::sqrt(
            std::max(0.0, static_cast<double>((sum_sq - sum * sum / n) / (n - 1))) / n);
        CHECK(std::abs(mc - closed) <= 3.0 * se);
    }
}

TEST_CASE("standard error shrinks like one over sqrt(n)") {
    const ModelParams p = experiment_params(0.5);
    const McEstimate small = mc_conditional_moment(p, 100.0, 2, 1.0, 100000, 31);
    const McEstimate large = mc_conditional_moment(p, 100.0, 2, 1.0, 400000, 31);
    const double ratio = large.std_error / small.std_error;
    CHECK(ratio > 0.45);
    CHECK(ratio < 0.55);
}

TEST_CASE("grid_minimize scans the penalized quadratic") {
    SUBCASE("convex instance keeps the kink") {
        const auto [x, value] = grid_minimize(1.0, 1.0, 2.0, 0.0, 2.0, 1e-4);
        CHECK(std::abs(x) <= 1e-4);
        CHECK(value <= 2.0 + 1e-4 + 1e-8);
        CHECK(value >= 2.0);
    }
    SUBCASE("negative slope lands near a symmetric minimizer") {
        const auto [x, value] = grid_minimize(1.0, -2.0, 5.0, 0.0, 2.0, 1e-4);
        CHECK(std::min(std::abs(x - 1.0), std::abs(x + 1.0)) <= 1e-4);
        CHECK(value == doctest::Approx(4.0).epsilon(1e-6));
    }
    SUBCASE("translation") {
        const auto [x, value] = grid_minimize(2.0, 0.0, 0.0, 3.0, 1.5, 1e-4);
        CHECK(std::abs(x - 3.0) <= 1e-4);
        CHECK(value >= 0.0);
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(grid_minimize(0.0, 1.0, 1.0, 0.0, 1.0, 1e-4), std::invalid_argument);
        CHECK_THROWS_AS(grid_minimize(1.0, 1.0, 1.0, 0.0, 1.0, 0.0), std::invalid_argument);
    }
}

TEST_CASE("grid scan shadows the analytic minimizer over random instances") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> a_dist(0.1, 5.0);
    std::uniform_real_distribution<double> b_dist(-5.0, 5.0);
    std::uniform_real_distribution<double> c_dist(0.0, 5.0);
    std::uniform_real_distribution<double> x0_dist(-3.0, 3.0);
    const double step = 1e-3;
    for (int i = 0; i < 100; ++i) {
        const double a = a_dist(rng);
        const double b = b_dist(rng);
        const double c = c_dist(rng);
        const double x0 = x0_dist(rng);
        const auto [mins, value] = piecewise_quadratic_min(a, b, c, x0);
        const auto [gx, gv] = grid_minimize(a, b, c, x0, std::abs(b) / (2.0 * a) + 1.0, step);
        double gap = std::abs(gx - mins.front());
        for (const double m : mins) gap = std::min(gap, std::abs(gx - m));
        CHECK(gap <= step + 1e-12);
        CHECK(gv >= value - 1e-12);
    }
}

TEST_CASE("oracle input validation") {
    const ModelParams p = experiment_params(0.5);
    CHECK_THROWS_AS(mc_conditional_moment(p, 100.0, 2, 1.0, 500, 1), std::invalid_argument);
    CHECK_THROWS_AS(mc_conditional_moment(p, 100.0, 0, 1.0, 2000, 1), std::invalid_argument);
    CHECK_THROWS_AS(mc_conditional_moment(p, 100.0, 1, 0.0, 2000, 1), std::invalid_argument);
    CHECK_THROWS_AS(
        mc_price_times_value(p, 100.0, -1.0, 1.0, [](double) { return 1.0; }, 2000, 1),
        std::invalid_argument);
}
