#pragma once

#include <functional>
#include <stdexcept>

#include "jdhedge/model.hpp"

namespace jdhedge {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
    // Gauss-Hermite nodes for the fast path; the result is accepted when the
    // node_count and 2*node_count rules agree to tolerance times the
    // integrand's absolute mass (relative accuracy on one-signed integrands).
    int node_count = 128;
    double tolerance = 1e-10;
    // Evaluation budget for the adaptive Gauss-Kronrod fallback.
    int max_evaluations = 200000;

    void validate() const;  // node_count >= 8, tolerance > 0
};

/// Standard normal CDF from the complementary error function.
double normal_cdf(double x);

// E[f(Z)] for Z ~ N(mean, variance). Gauss-Hermite after the change of
// variables z = mean + sqrt(2 variance) x; integrands the fixed rule cannot
// settle (kinked payoffs, near-step Phi factors) go through an adaptive
// Gauss-Kronrod fallback on x in [-16, 16]. Throws QuadratureError on
// non-finite f values or an exhausted budget.
double expect_normal(const std::function<double(double)>& f, double mean,
                     double variance, const QuadratureSpec& spec = {});

// E[value_fn(S^BS_{u+dt}) | S^BS_u = s_bs_u] under the physical drift:
//   integral of value_fn(s_bs_u e^{(mu - sigma^2/2) dt + sigma z}) phi(z; 0; dt) dz.
double conditional_value_bs(const ModelParams& params, double s_bs_u, double dt,
                            const std::function<double(double)>& value_fn,
                            const QuadratureSpec& spec = {});

// E[S_{u+dt} * value_fn(S^BS_{u+dt}) | F_u]:
//   s_u e^{(mu + lambda eps_1 - sigma^2/2) dt} *
//   integral of e^{sigma z} value_fn(s_bs_u e^{(mu - sigma^2/2) dt + sigma z}) phi(z; 0; dt) dz.
double conditional_price_times_value(const ModelParams& params, double s_u,
                                     double s_bs_u, double dt,
                                     const std::function<double(double)>& value_fn,
                                     const QuadratureSpec& spec = {});

// Closed form of E[e^{alpha Z} Phi(a Z + b)] for Z ~ N(mean, variance):
//   e^{alpha mean + alpha^2 variance / 2} *
//   Phi((a (mean + alpha variance) + b) / sqrt(1 + a^2 variance)).
double normal_phi_product_expectation(double alpha, double a, double b,
                                      double mean, double variance);

}  // namespace jdhedge
