#include "creativity/scoring.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "creativity/errors.hpp"

namespace creativity {

NllBreakdown sequence_nll(const ModelScorer& scorer, const Creation& x, const Prompt& u,
                          const Info& info, std::uint32_t window) {
    NllBreakdown out;
    out.per_token.reserve(x.tokens.size());
    bool infinite = false;
    for (std::size_t t = 0; t < x.tokens.size(); ++t) {
        std::size_t win = std::min<std::size_t>(window, t);
        std::span<const Token> prefix(x.tokens.data() + t - win, win);
        FiniteDistribution dist = scorer.next_token_dist(info, u, prefix);
        Token tok = x.tokens[t];
        if (tok < 0 || static_cast<std::size_t>(tok) >= dist.size())
            throw DomainError("sequence_nll: token " + std::to_string(tok) +
                              " outside the scorer's alphabet");
        double p = dist.prob(static_cast<std::size_t>(tok));
        if (p <= 0.0) {
            out.per_token.push_back(std::numeric_limits<double>::infinity());
            infinite = true;
        } else {
            out.per_token.push_back(-std::log(p));
        }
    }
    out.total = infinite ? std::numeric_limits<double>::infinity() : kahan_sum(out.per_token);
    return out;
}

bool check_bound_M(const NllBreakdown& nll, double m_bound) {
    if (!(m_bound > 0.0)) throw DomainError("check_bound_M: M must be positive");
    return nll.total <= m_bound;
}

namespace {

class TruthScorer : public ModelScorer {
public:
    explicit TruthScorer(std::shared_ptr<const WorldSpec> spec) : spec_(std::move(spec)) {
        for (std::uint32_t c = 0; c < spec_->num_creators; ++c) {
            auto inserted = by_info_.emplace(spec_->info_map[c], c);
            if (!inserted.second)
                throw ValidationError(
                    "truth scorer needs distinct info tokens per creator; creators " +
                    std::to_string(inserted.first->second) + " and " + std::to_string(c) +
                    " share one list");
        }
    }

    FiniteDistribution next_token_dist(const Info& info, const Prompt& prompt,
                                       std::span<const Token> prefix) const override {
        auto it = by_info_.find(info.tokens);
        if (it == by_info_.end()) throw LookupError("truth scorer: unknown info token list");
        return truth_next_token(*spec_, Creator{it->second}, prompt, prefix);
    }

private:
    std::shared_ptr<const WorldSpec> spec_;
    std::map<std::vector<Token>, std::uint32_t> by_info_;
};

class UniformMixScorer : public ModelScorer {
public:
    UniformMixScorer(ScorerPtr inner, double lambda) : inner_(std::move(inner)), lambda_(lambda) {}

    FiniteDistribution next_token_dist(const Info& info, const Prompt& prompt,
                                       std::span<const Token> prefix) const override {
        FiniteDistribution base = inner_->next_token_dist(info, prompt, prefix);
        if (lambda_ == 0.0) return base;
        double u = lambda_ / static_cast<double>(base.size());
        std::vector<double> mixed(base.size());
        for (std::size_t i = 0; i < base.size(); ++i)
            mixed[i] = (1.0 - lambda_) * base.prob(i) + u;
        return FiniteDistribution(std::move(mixed));
    }

private:
    ScorerPtr inner_;
    double lambda_;
};

}  // namespace

ScorerPtr scorer_from_world(std::shared_ptr<const WorldSpec> spec) {
    return std::make_shared<TruthScorer>(std::move(spec));
}

ScorerPtr scorer_from_world(std::shared_ptr<const WorldSpec> spec, Creator c) {
    if (c.id >= spec->num_creators)
        throw LookupError("scorer_from_world: creator id out of range");
    return scorer_from_world(std::move(spec));
}

ScorerPtr mix_with_uniform(ScorerPtr scorer, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw DomainError("mix_with_uniform: lambda must lie in [0, 1]");
    return std::make_shared<UniformMixScorer>(std::move(scorer), lambda);
}

FiniteDistribution scorer_sequence_distribution(const WorldSpec& spec, const ModelScorer& scorer,
                                                const Prompt& u, const Info& info) {
    std::uint64_t count = creation_count(spec);
    std::vector<double> probs(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Creation x = creation_at(spec, i);
        double p = 1.0;
        for (std::uint32_t t = 0; t < spec.seq_len && p > 0.0; ++t) {
            std::size_t win = std::min<std::size_t>(spec.window, t);
            std::span<const Token> prefix(x.tokens.data() + t - win, win);
            p *= scorer.next_token_dist(info, u, prefix)
                     .prob(static_cast<std::size_t>(x.tokens[t]));
        }
        probs[i] = p;
    }
    return FiniteDistribution(std::move(probs));
}

}  // namespace creativity
