#include "creativity/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "creativity/errors.hpp"

namespace creativity {

const char* metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::E0: return "E0";
        case MetricKind::E1: return "E1";
        case MetricKind::E2: return "E2";
        case MetricKind::E3: return "E3";
    }
    return "?";
}

double pairwise_sum(const std::vector<double>& values) {
    // Fixed binary tree over indices: result is independent of how the terms
    // were produced (serial or parallel).
    struct Reducer {
        const std::vector<double>& v;
        double reduce(std::size_t begin, std::size_t end) const {
            if (end - begin == 1) return v[begin];
            std::size_t mid = begin + (end - begin) / 2;
            return reduce(begin, mid) + reduce(mid, end);
        }
    };
    if (values.empty()) return 0.0;
    return Reducer{values}.reduce(0, values.size());
}

namespace {

MetricValue bit_mean(MetricKind kind, const std::vector<int>& bits) {
    if (bits.empty())
        throw DomainError(std::string(metric_kind_name(kind)) + ": empty sample list");
    double sum = 0.0;
    for (int b : bits) {
        if (b != 0 && b != 1)
            throw DomainError(std::string(metric_kind_name(kind)) +
                              ": evaluator bits must be 0 or 1");
        sum += b;
    }
    MetricValue out;
    out.kind = kind;
    out.value = sum / static_cast<double>(bits.size());
    out.n = bits.size();
    return out;
}

}  // namespace

MetricValue e0(const std::vector<int>& bits) { return bit_mean(MetricKind::E0, bits); }

MetricValue e2(const std::vector<int>& bits) { return bit_mean(MetricKind::E2, bits); }

double r_weight(double tau, double entropy_nats) {
    if (!(tau > 0.0)) throw DomainError("r_weight: tau must be positive");
    if (!(entropy_nats >= 0.0)) throw DomainError("r_weight: entropy must be non-negative");
    return tau + entropy_nats;
}

MetricValue weighted_nll_metric(MetricKind kind, const std::vector<WeightedSample>& samples,
                                const ModelScorer& scorer, double tau, std::uint32_t window) {
    if (kind != MetricKind::E1 && kind != MetricKind::E3)
        throw DomainError("weighted_nll_metric: bit metrics carry no likelihood weights");
    if (samples.empty())
        throw DomainError(std::string(metric_kind_name(kind)) + ": empty sample list");
    std::vector<double> terms;
    terms.reserve(samples.size());
    double r_min_used = std::numeric_limits<double>::infinity();
    double m_observed = 0.0;
    bool infinite = false;
    for (const WeightedSample& s : samples) {
        double r = r_weight(tau, s.entropy_nats);
        NllBreakdown nll = sequence_nll(scorer, s.creation, s.prompt, s.info, window);
        r_min_used = std::min(r_min_used, r);
        m_observed = std::max(m_observed, nll.total);
        if (std::isinf(nll.total)) infinite = true;
        terms.push_back(nll.total / r);
    }
    MetricValue out;
    out.kind = kind;
    out.n = samples.size();
    out.value = infinite ? std::numeric_limits<double>::infinity()
                         : pairwise_sum(terms) / static_cast<double>(samples.size());
    out.r_min_used = r_min_used;
    out.m_observed = m_observed;
    return out;
}

MetricValue e1(const std::vector<std::pair<Creation, Creator>>& samples,
               const ModelScorer& scorer, const WorldSpec& spec, double tau,
               std::uint32_t window) {
    if (spec.num_prompts != 1)
        throw DomainError("e1: world has several prompts; use e3 with (x, u, c) triples");
    Prompt u = prompt_of(spec, 0);
    std::map<std::uint32_t, double> entropy_by_creator;
    std::vector<WeightedSample> items;
    items.reserve(samples.size());
    for (const auto& [x, c] : samples) {
        auto it = entropy_by_creator.find(c.id);
        if (it == entropy_by_creator.end())
            it = entropy_by_creator
                     .emplace(c.id, entropy(sequence_distribution(spec, c, u)))
                     .first;
        items.push_back(WeightedSample{x, u, information_of(spec, c), it->second});
    }
    return weighted_nll_metric(MetricKind::E1, items, scorer, tau, window);
}

MetricValue e3(const std::vector<std::tuple<Creation, Prompt, Creator>>& samples,
               const ModelScorer& scorer, const WorldSpec& spec, double tau,
               std::uint32_t window) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> entropy_by_pair;
    std::vector<WeightedSample> items;
    items.reserve(samples.size());
    for (const auto& [x, u, c] : samples) {
        auto key = std::make_pair(u.id, c.id);
        auto it = entropy_by_pair.find(key);
        if (it == entropy_by_pair.end())
            it = entropy_by_pair.emplace(key, entropy(sequence_distribution(spec, c, u))).first;
        items.push_back(WeightedSample{x, u, information_of(spec, c), it->second});
    }
    return weighted_nll_metric(MetricKind::E3, items, scorer, tau, window);
}

double r_min_exact(const WorldSpec& spec, double tau) {
    if (!(tau > 0.0)) throw DomainError("r_min_exact: tau must be positive");
    double min_entropy = std::numeric_limits<double>::infinity();
    for (std::uint32_t c = 0; c < spec.num_creators; ++c) {
        if (spec.creator_weights[c] <= 0.0) continue;
        for (std::uint32_t u = 0; u < spec.num_prompts; ++u) {
            if (spec.prompt_weights[u] <= 0.0) continue;
            min_entropy = std::min(
                min_entropy, entropy(sequence_distribution(spec, Creator{c}, prompt_of(spec, u))));
        }
    }
    if (std::isinf(min_entropy))
        throw DomainError("r_min_exact: no (prompt, creator) pair carries positive mass");
    return tau + min_entropy;
}

}  // namespace creativity
