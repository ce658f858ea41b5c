#pragma once

#include <functional>

#include "jdhedge/quadrature.hpp"

namespace jdhedge {

struct CallContract {
    double strike = 0.0;
    double maturity = 0.0;  // months

    void validate() const;

    bool operator==(const CallContract&) const = default;
};

// Zero-rate Black-Scholes call value S Phi(d+) - K Phi(d-) with
// d+ = [ln(S/K) + sigma^2 tau / 2] / (sigma sqrt(tau)). tau = 0 returns the
// payoff.
double call_price(double s, double strike, double sigma, double tau);

// Hedge ratio Phi(d+), in (0, 1). tau must be strictly positive.
double call_delta(double s, double strike, double sigma, double tau);

// Zero-rate value of an arbitrary European payoff by quadrature:
// E[payoff(s e^{-sigma^2 tau / 2 + sigma sqrt(tau) Z})], Z standard normal.
double vanilla_price(const std::function<double(double)>& payoff, double s,
                     double sigma, double tau, const QuadratureSpec& spec = {});

}  // namespace jdhedge
