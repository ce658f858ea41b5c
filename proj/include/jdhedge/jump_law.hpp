#pragma once

#include <random>
#include <vector>

namespace jdhedge {

// Distribution of a relative jump size xi. Support points must be strictly
// greater than -1 so prices stay positive.
class JumpLaw {
public:
    enum class Kind { Constant, Discrete };

    static JumpLaw constant(double value);
    static JumpLaw discrete(std::vector<double> values, std::vector<double> probs);

    Kind kind() const noexcept { return kind_; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& probs() const noexcept { return probs_; }

    // j-th raw moment E[xi^j], exact (no sampling, no quadrature).
    double moment(int j) const;

    // Draws one jump size. Constant laws consume no randomness.
    double sample(std::mt19937_64& rng) const;

    bool operator==(const JumpLaw&) const = default;

private:
    JumpLaw(Kind kind, std::vector<double> values, std::vector<double> probs);

    Kind kind_;
    std::vector<double> values_;
    std::vector<double> probs_;
    std::vector<double> cdf_;
};

/// epsilon_j = E[xi^j]
double jump_moment(const JumpLaw& law, int j);

}  // namespace jdhedge
