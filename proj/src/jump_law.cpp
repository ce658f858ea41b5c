#include "jdhedge/jump_law.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace jdhedge {

namespace {

// 53-bit uniform in [0, 1) from raw generator output; keeps sampling
// independent of the standard library's unspecified distribution algorithms.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

JumpLaw::JumpLaw(Kind kind, std::vector<double> values, std::vector<double> probs)
    : kind_(kind), values_(std::move(values)), probs_(std::move(probs)) {
    if (values_.empty() || values_.size() != probs_.size())
        throw std::invalid_argument("JumpLaw: values and probs must be non-empty and equal-sized");
    double total = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] <= -1.0)
            throw std::invalid_argument("JumpLaw: every jump size must be finite and > -1");
        if (!std::isfinite(probs_[i]) || probs_[i] < 0.0)
            throw std::invalid_argument("JumpLaw: probabilities must be nonnegative");
        total += probs_[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("JumpLaw: probabilities must sum to 1 within 1e-12");
    cdf_.resize(probs_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        run += probs_[i];
        cdf_[i] = run;
    }
    cdf_.back() = 1.0;
}

JumpLaw JumpLaw::constant(double value) {
    return JumpLaw(Kind::Constant, {value}, {1.0});
}

JumpLaw JumpLaw::discrete(std::vector<double> values, std::vector<double> probs) {
    return JumpLaw(Kind::Discrete, std::move(values), std::move(probs));
}

double JumpLaw::moment(int j) const {
    if (j < 1) throw std::invalid_argument("JumpLaw::moment: j must be >= 1");
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        double p = 1.0;
        for (int r = 0; r < j; ++r) p *= values_[i];
        acc += probs_[i] * p;
    }
    return acc;
}

double JumpLaw::sample(std::mt19937_64& rng) const {
    if (kind_ == Kind::Constant) return values_.front();
    const double u = uniform01(rng);
    for (std::size_t i = 0; i + 1 < cdf_.size(); ++i)
        if (u < cdf_[i]) return values_[i];
    return values_.back();
}

double jump_moment(const JumpLaw& law, int j) { return law.moment(j); }

}  // namespace jdhedge
