#pragma once

#include <cstddef>
#include <vector>

#include "creativity/rng.hpp"

namespace creativity {

// Probability vector over {0, ..., V-1}, natural-log convention throughout.
// Immutable after construction.  Construction accepts vectors whose sum is
// within 1e-9 of one, renormalizes them, and guarantees the stored sum is
// within 1e-12 of one; anything further off is rejected as a ValidationError.
class FiniteDistribution {
public:
    explicit FiniteDistribution(std::vector<double> probs);

    static FiniteDistribution uniform(std::size_t size);
    static FiniteDistribution point_mass(std::size_t index, std::size_t size);

    std::size_t size() const { return probs_.size(); }
    double prob(std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    bool operator==(const FiniteDistribution& other) const = default;

private:
    std::vector<double> probs_;
};

// Shannon entropy in nats; zero-probability entries contribute zero.
double entropy(const FiniteDistribution& d);

// KL(p || q) in nats.  Returns +infinity when p puts mass where q has none.
// Mismatched sizes raise DimensionError.
double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q);

// (q_i + eps) / (1 + V*eps).  Every smoothed entry is at least
// eps / (1 + V*eps), which is what gives scorers a finite score ceiling.
FiniteDistribution smooth(const FiniteDistribution& q, double eps);

// Inverse-CDF draw; fully determined by the stream state.
std::size_t sample(const FiniteDistribution& d, RandomStream& rng);

// Compensated summation, used anywhere a tolerance tighter than naive
// accumulation must hold.
double kahan_sum(const std::vector<double>& values);

}  // namespace creativity
