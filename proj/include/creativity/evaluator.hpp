#pragma once

#include <memory>

#include "creativity/scoring.hpp"
#include "creativity/world.hpp"

namespace creativity {

// Binary judgment of one scorer's emulation of one creator under one prompt.
// Implementations must be deterministic in their arguments; output is exactly
// 0 or 1.
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual int judge(const ModelScorer& scorer, const Prompt& u, const Creator& c) const = 0;
};

using EvaluatorPtr = std::shared_ptr<const Evaluator>;

// Built-in evaluator: judge = 1 iff the exact sequence-level KL divergence
// from the world's creation law p(.|u,c) to the scorer's induced law
// q(.|u,I[c]) is >= tau (an infinite KL also yields 1).  KL strictly below
// tau yields 0.  Enumerates all V^T creations, so the world must fit its
// enumeration cap.
EvaluatorPtr kl_threshold_evaluator(std::shared_ptr<const WorldSpec> spec, double tau);

// Exact population mean of the judgment bit: sum over all (u, c) pairs of
// D_U(u) * D_C(c) * judge(scorer, u, c).  Always in [0, 1].
double exact_expected_L(const WorldSpec& spec, const ModelScorer& scorer, const Evaluator& ev);

// Ground truth of the certified event: exact_expected_L <= delta, boundary
// inclusive.
bool exact_delta_claim(const WorldSpec& spec, const ModelScorer& scorer, const Evaluator& ev,
                       double delta);

}  // namespace creativity
