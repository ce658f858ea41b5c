#include "jdhedge/black_scholes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jdhedge {

void CallContract::validate() const {
    if (!std::isfinite(strike) || strike <= 0.0)
        throw std::invalid_argument("strike must be positive");
    if (!std::isfinite(maturity) || maturity <= 0.0)
        throw std::invalid_argument("maturity must be positive");
}

namespace {

void check_price_inputs(double s, double strike, double sigma) {
    if (!std::isfinite(s) || s <= 0.0) throw std::invalid_argument("spot must be positive");
    if (!std::isfinite(strike) || strike <= 0.0)
        throw std::invalid_argument("strike must be positive");
    if (!std::isfinite(sigma) || sigma <= 0.0)
        throw std::invalid_argument("sigma must be positive");
}

double d_plus(double s, double strike, double sigma, double tau) {
    const double vol = sigma * std::sqrt(tau);
    return (std::log(s / strike) + 0.5 * sigma * sigma * tau) / vol;
}

}  // namespace

double call_price(double s, double strike, double sigma, double tau) {
    check_price_inputs(s, strike, sigma);
    if (!std::isfinite(tau) || tau < 0.0)
        throw std::invalid_argument("tau must be nonnegative");
    if (tau == 0.0) return std::max(s - strike, 0.0);
    const double dp = d_plus(s, strike, sigma, tau);
    const double dm = dp - sigma * std::sqrt(tau);
    return s * normal_cdf(dp) - strike * normal_cdf(dm);
}

double call_delta(double s, double strike, double sigma, double tau) {
    check_price_inputs(s, strike, sigma);
    if (!std::isfinite(tau) || tau <= 0.0)
        throw std::invalid_argument("call_delta: tau must be positive");
    return normal_cdf(d_plus(s, strike, sigma, tau));
}

double vanilla_price(const std::function<double(double)>& payoff, double s, double sigma,
                     double tau, const QuadratureSpec& spec) {
    if (!payoff) throw std::invalid_argument("vanilla_price: payoff must be callable");
    if (!std::isfinite(s) || s <= 0.0) throw std::invalid_argument("spot must be positive");
    if (!std::isfinite(sigma) || sigma <= 0.0)
        throw std::invalid_argument("sigma must be positive");
    if (!std::isfinite(tau) || tau <= 0.0) throw std::invalid_argument("tau must be positive");
    const double drift = -0.5 * sigma * sigma * tau;  // zero-rate martingale measure
    const double vol = sigma * std::sqrt(tau);
    return expect_normal([&](double z) { return payoff(s * std::exp(drift + vol * z)); }, 0.0,
                         1.0, spec);
}

}  // namespace jdhedge
