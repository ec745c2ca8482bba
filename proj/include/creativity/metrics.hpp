#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "creativity/scoring.hpp"
#include "creativity/world.hpp"

namespace creativity {

enum class MetricKind { E0, E1, E2, E3 };

const char* metric_kind_name(MetricKind kind);

struct MetricValue {
    MetricKind kind = MetricKind::E0;
    double value = 0.0;  // +infinity possible for E1/E3
    std::uint64_t n = 0;
    // Present for the weighted-likelihood metrics; consumed by certificate
    // precondition checks.
    std::optional<double> r_min_used;   // min r over the evaluated samples
    std::optional<double> m_observed;   // max per-sequence NLL over the samples
};

// Mean of exact evaluator bits over sampled creators.
MetricValue e0(const std::vector<int>& bits);

// Same arithmetic over sampled (prompt, creator) pairs.
MetricValue e2(const std::vector<int>& bits);

// tau + H, the per-sample likelihood weight.
double r_weight(double tau, double entropy_nats);

// Entropy-weighted mean sequence NLL over (creation, creator) pairs, with
// exact entropies from the world.  The world must have a single prompt (the
// prompt-aware variant is e3).
MetricValue e1(const std::vector<std::pair<Creation, Creator>>& samples,
               const ModelScorer& scorer, const WorldSpec& spec, double tau,
               std::uint32_t window);

// Prompt-conditioned variant over (creation, prompt, creator) triples.
MetricValue e3(const std::vector<std::tuple<Creation, Prompt, Creator>>& samples,
               const ModelScorer& scorer, const WorldSpec& spec, double tau,
               std::uint32_t window);

// Shared core for the weighted metrics, with caller-supplied entropies.  This
// is the path datasets without a backing world go through; the metric never
// estimates entropy from data.
struct WeightedSample {
    Creation creation;
    Prompt prompt;
    Info info;
    double entropy_nats = 0.0;  // H[p(.|u,c)] for this sample's conditioning
};

MetricValue weighted_nll_metric(MetricKind kind, const std::vector<WeightedSample>& samples,
                                const ModelScorer& scorer, double tau, std::uint32_t window);

// tau + the smallest sequence-level entropy among (prompt, creator) pairs
// carrying positive mass; the population floor for certificate inputs.
double r_min_exact(const WorldSpec& spec, double tau);

// Deterministic reduction in a fixed tree order; used so parallel per-sample
// evaluation cannot change the result.
double pairwise_sum(const std::vector<double>& values);

}  // namespace creativity
