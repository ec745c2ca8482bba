#pragma once

#include <memory>
#include <span>
#include <vector>

#include "creativity/distribution.hpp"
#include "creativity/world.hpp"

namespace creativity {

// The model under evaluation, seen purely as a conditional next-token
// scorer.  Implementations must be deterministic in their arguments and safe
// for concurrent read-only use.
class ModelScorer {
public:
    virtual ~ModelScorer() = default;
    virtual FiniteDistribution next_token_dist(const Info& info, const Prompt& prompt,
                                               std::span<const Token> prefix) const = 0;
};

using ScorerPtr = std::shared_ptr<const ModelScorer>;

struct NllBreakdown {
    std::vector<double> per_token;  // nats, +infinity for zero-probability tokens
    double total = 0.0;             // sum of per_token
};

// Windowed autoregressive negative log-likelihood of x under the scorer:
// position t conditions on the last min(window, t) tokens plus (info, prompt).
NllBreakdown sequence_nll(const ModelScorer& scorer, const Creation& x, const Prompt& u,
                          const Info& info, std::uint32_t window);

// True iff the realized total stays under the declared ceiling M.
bool check_bound_M(const NllBreakdown& nll, double m_bound);

// The oracle baseline q = p: next-token rows looked up from the world's own
// law, with the creator resolved from the Info argument.  Requires distinct
// info token lists per creator.  The creator argument is validated and
// documents which creator's emulation the baseline is exact for; the returned
// scorer answers for every creator of the world.
ScorerPtr scorer_from_world(std::shared_ptr<const WorldSpec> spec, Creator c);
ScorerPtr scorer_from_world(std::shared_ptr<const WorldSpec> spec);

// (1-lambda)*q + lambda*uniform on every next-token row.
ScorerPtr mix_with_uniform(ScorerPtr scorer, double lambda);

// Exact sequence-level distribution the scorer induces for one (info, prompt)
// conditioning, by enumeration of all V^T creations.
FiniteDistribution scorer_sequence_distribution(const WorldSpec& spec, const ModelScorer& scorer,
                                                const Prompt& u, const Info& info);

}  // namespace creativity
