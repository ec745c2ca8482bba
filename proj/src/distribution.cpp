#include "creativity/distribution.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "creativity/errors.hpp"

namespace creativity {

namespace {

double kahan_add(double& sum, double& carry, double value) {
    double y = value - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    return sum;
}

}  // namespace

double kahan_sum(const std::vector<double>& values) {
    double sum = 0.0, carry = 0.0;
    for (double v : values) kahan_add(sum, carry, v);
    return sum;
}

FiniteDistribution::FiniteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ValidationError("distribution must have at least one entry");
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        double p = probs_[i];
        if (!std::isfinite(p) || p < 0.0)
            throw ValidationError("probability at index " + std::to_string(i) +
                                  " is negative or non-finite");
    }
    double total = kahan_sum(probs_);
    if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError("probabilities sum to " + std::to_string(total) +
                              ", outside 1 +/- 1e-9");
    // Dividing by the compensated total leaves the renormalized sum within a
    // few ulps of one, comfortably inside the 1e-12 guarantee.
    for (double& p : probs_) p /= total;
}

FiniteDistribution FiniteDistribution::uniform(std::size_t size) {
    if (size == 0) throw ValidationError("uniform distribution needs size >= 1");
    return FiniteDistribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

FiniteDistribution FiniteDistribution::point_mass(std::size_t index, std::size_t size) {
    if (index >= size) throw ValidationError("point mass index out of range");
    std::vector<double> p(size, 0.0);
    p[index] = 1.0;
    return FiniteDistribution(std::move(p));
}

double entropy(const FiniteDistribution& d) {
    double sum = 0.0, carry = 0.0;
    for (double p : d.probs())
        if (p > 0.0) kahan_add(sum, carry, -p * std::log(p));
    return sum < 0.0 ? 0.0 : sum;
}

double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q) {
    if (p.size() != q.size())
        throw DimensionError("kl_divergence: size mismatch " + std::to_string(p.size()) +
                             " vs " + std::to_string(q.size()));
    double sum = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double pi = p.prob(i);
        if (pi <= 0.0) continue;
        double qi = q.prob(i);
        if (qi <= 0.0) return std::numeric_limits<double>::infinity();
        kahan_add(sum, carry, pi * std::log(pi / qi));
    }
    return sum < 0.0 ? 0.0 : sum;
}

FiniteDistribution smooth(const FiniteDistribution& q, double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw DomainError("smooth: eps must be a non-negative finite real");
    if (eps == 0.0) return q;
    double denom = 1.0 + static_cast<double>(q.size()) * eps;
    std::vector<double> out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) out[i] = (q.prob(i) + eps) / denom;
    return FiniteDistribution(std::move(out));
}

std::size_t sample(const FiniteDistribution& d, RandomStream& rng) {
    double u = rng.next_double();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        cum += d.prob(i);
        if (u < cum) return i;
    }
    return d.size() - 1;
}

}  // namespace creativity
