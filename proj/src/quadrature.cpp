#include "jdhedge/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <vector>

namespace jdhedge {

namespace {

struct GhTable {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Hermite nodes/weights for weight e^{-x^2}: Newton iteration on the
// orthonormal Hermite recurrence, roots filled in from the outermost pair.
GhTable compute_gh(int n) {
    GhTable t;
    t.x.assign(static_cast<std::size_t>(n), 0.0);
    t.w.assign(static_cast<std::size_t>(n), 0.0);
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * t.x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * t.x[1];
        else
            z = 2.0 * z - t.x[static_cast<std::size_t>(i) - 2];

        double pp = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        t.x[static_cast<std::size_t>(i)] = z;
        t.x[static_cast<std::size_t>(n) - 1 - i] = -z;
        t.w[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
        t.w[static_cast<std::size_t>(n) - 1 - i] = t.w[static_cast<std::size_t>(i)];
    }
    return t;
}

const GhTable& gh_table(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GhTable>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GhTable>(compute_gh(n));
    return *slot;
}

// G7/K15 pair on [-1, 1]; Kronrod nodes with their weights, Gauss weights on
// the shared odd-index nodes.
constexpr double kKronrodX[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kKronrodW[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kGaussW[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                               0.417959183673469, 0.381830050505119, 0.279705391489277,
                               0.129484966168870};

struct Segment {
    double a = 0.0;
    double b = 0.0;
    double integral = 0.0;
    double error = 0.0;
    double mass = 0.0;  // integral of |f|, the scale the tolerance applies to
};

template <typename F>
Segment gk15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double k = 0.0;
    double g = 0.0;
    double mass = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(mid + half * kKronrodX[i]);
        k += kKronrodW[i] * v;
        mass += kKronrodW[i] * std::abs(v);
        if (i % 2 == 1) g += kGaussW[i / 2] * v;
    }
    Segment s;
    s.a = a;
    s.b = b;
    s.integral = k * half;
    s.error = std::abs((k - g) * half);
    s.mass = mass * half;
    return s;
}

// Global adaptive refinement: keep bisecting the segment with the largest
// error estimate until the summed estimate drops below tolerance times the
// integrand's absolute mass (relative accuracy on one-signed integrands,
// mass-scaled absolute accuracy under cancellation).
template <typename F>
double adaptive_gk(const F& f, double a, double b, double tolerance, int max_evaluations) {
    auto worse = [](const Segment& lhs, const Segment& rhs) { return lhs.error < rhs.error; };
    std::priority_queue<Segment, std::vector<Segment>, decltype(worse)> queue(worse);

    const int initial = 8;
    int evaluations = 0;
    double total = 0.0;
    double total_error = 0.0;
    double total_mass = 0.0;
    for (int i = 0; i < initial; ++i) {
        Segment s = gk15(f, a + (b - a) * i / initial, a + (b - a) * (i + 1) / initial);
        evaluations += 15;
        total += s.integral;
        total_error += s.error;
        total_mass += s.mass;
        queue.push(s);
    }

    while (total_error > tolerance * total_mass) {
        if (evaluations + 30 > max_evaluations)
            throw QuadratureError("adaptive quadrature exhausted its evaluation budget");
        const Segment parent = queue.top();
        queue.pop();
        const double mid = 0.5 * (parent.a + parent.b);
        const Segment left = gk15(f, parent.a, mid);
        const Segment right = gk15(f, mid, parent.b);
        evaluations += 30;
        total += left.integral + right.integral - parent.integral;
        total_error += left.error + right.error - parent.error;
        total_mass += left.mass + right.mass - parent.mass;
        queue.push(left);
        queue.push(right);
    }
    return total;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (node_count < 8) throw std::invalid_argument("quadrature node_count must be >= 8");
    if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
    if (max_evaluations < 100)
        throw std::invalid_argument("quadrature max_evaluations must be >= 100");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double expect_normal(const std::function<double(double)>& f, double mean,
                     double variance, const QuadratureSpec& spec) {
    spec.validate();
    if (!f) throw std::invalid_argument("expect_normal: f must be callable");
    if (!std::isfinite(mean)) throw std::invalid_argument("expect_normal: mean must be finite");
    if (!std::isfinite(variance) || !(variance > 0.0))
        throw std::invalid_argument("expect_normal: variance must be positive");

    const double scale = std::sqrt(2.0 * variance);
    auto g = [&](double x) {
        const double v = f(mean + scale * x);
        if (!std::isfinite(v)) throw QuadratureError("integrand evaluated to a non-finite value");
        return v;
    };

    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    struct Pass {
        double integral;
        double mass;
    };
    auto gh_pass = [&](int n) {
        const GhTable& t = gh_table(n);
        double acc = 0.0;
        double mass = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = g(t.x[static_cast<std::size_t>(i)]);
            acc += t.w[static_cast<std::size_t>(i)] * v;
            mass += t.w[static_cast<std::size_t>(i)] * std::abs(v);
        }
        return Pass{acc * inv_sqrt_pi, mass * inv_sqrt_pi};
    };

    const Pass coarse = gh_pass(spec.node_count);
    const Pass fine = gh_pass(2 * spec.node_count);
    if (std::abs(fine.integral - coarse.integral) <= spec.tolerance * fine.mass)
        return fine.integral;

    // Kinked or near-step integrands: refine locally. The e^{-x^2} kernel
    // makes anything beyond |x| = 16 irrelevant for sub-Gaussian f.
    auto weighted = [&](double x) { return g(x) * std::exp(-x * x) * inv_sqrt_pi; };
    return adaptive_gk(weighted, -16.0, 16.0, spec.tolerance, spec.max_evaluations);
}

double conditional_value_bs(const ModelParams& params, double s_bs_u, double dt,
                            const std::function<double(double)>& value_fn,
                            const QuadratureSpec& spec) {
    params.validate();
    if (!(s_bs_u > 0.0))
        throw std::invalid_argument("conditional_value_bs: s_bs_u must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("conditional_value_bs: dt must be positive");
    const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
    return expect_normal(
        [&](double z) { return value_fn(s_bs_u * std::exp(drift + params.sigma * z)); }, 0.0,
        dt, spec);
}

double conditional_price_times_value(const ModelParams& params, double s_u,
                                     double s_bs_u, double dt,
                                     const std::function<double(double)>& value_fn,
                                     const QuadratureSpec& spec) {
    params.validate();
    if (!(s_u > 0.0) || !(s_bs_u > 0.0))
        throw std::invalid_argument("conditional_price_times_value: prices must be positive");
    if (!(dt > 0.0))
        throw std::invalid_argument("conditional_price_times_value: dt must be positive");
    const double eps1 = params.jump.moment(1);
    const double sigma = params.sigma;
    const double drift = (params.mu - 0.5 * sigma * sigma) * dt;
    const double prefactor =
        s_u * std::exp((params.mu + params.lambda * eps1 - 0.5 * sigma * sigma) * dt);
    const double integral = expect_normal(
        [&](double z) {
            return std::exp(sigma * z) * value_fn(s_bs_u * std::exp(drift + sigma * z));
        },
        0.0, dt, spec);
    return prefactor * integral;
}

double normal_phi_product_expectation(double alpha, double a, double b, double mean,
                                      double variance) {
    if (!std::isfinite(alpha) || !std::isfinite(a) || !std::isfinite(b) ||
        !std::isfinite(mean))
        throw std::invalid_argument("normal_phi_product_expectation: inputs must be finite");
    if (!std::isfinite(variance) || !(variance > 0.0))
        throw std::invalid_argument("normal_phi_product_expectation: variance must be positive");
    return std::exp(alpha * mean + 0.5 * alpha * alpha * variance) *
           normal_cdf((a * (mean + alpha * variance) + b) / std::sqrt(1.0 + a * a * variance));
}

}  // namespace jdhedge
