#include "creativity/evaluator.hpp"

#include <utility>

#include "creativity/errors.hpp"

namespace creativity {

namespace {

class KlThresholdEvaluator final : public Evaluator {
public:
    KlThresholdEvaluator(std::shared_ptr<const WorldSpec> spec, double tau)
        : spec_(std::move(spec)), tau_(tau) {
        if (!spec_) throw ValidationError("kl_threshold_evaluator: null world");
        if (!(tau_ > 0.0)) throw DomainError("kl_threshold_evaluator: tau must be positive");
        creation_count(*spec_);  // fail fast if the world is not enumerable
    }

    int judge(const ModelScorer& scorer, const Prompt& u, const Creator& c) const override {
        const FiniteDistribution truth = sequence_distribution(*spec_, c, u);
        const Info info = information_of(*spec_, c);
        const FiniteDistribution modeled = scorer_sequence_distribution(*spec_, scorer, u, info);
        const double kl = kl_divergence(truth, modeled);
        return kl < tau_ ? 0 : 1;  // equality and +infinity both judge 1
    }

private:
    std::shared_ptr<const WorldSpec> spec_;
    double tau_;
};

}  // namespace

EvaluatorPtr kl_threshold_evaluator(std::shared_ptr<const WorldSpec> spec, double tau) {
    return std::make_shared<KlThresholdEvaluator>(std::move(spec), tau);
}

double exact_expected_L(const WorldSpec& spec, const ModelScorer& scorer, const Evaluator& ev) {
    const FiniteDistribution d_c = creator_distribution(spec);
    const FiniteDistribution d_u = prompt_distribution(spec);
    double acc = 0.0;
    double comp = 0.0;  // Kahan carry
    for (std::uint32_t ui = 0; ui < spec.num_prompts; ++ui) {
        const double wu = d_u.prob(ui);
        if (wu == 0.0) continue;
        const Prompt u = prompt_of(spec, ui);
        for (std::uint32_t ci = 0; ci < spec.num_creators; ++ci) {
            const double w = wu * d_c.prob(ci);
            if (w == 0.0) continue;
            const int bit = ev.judge(scorer, u, Creator{ci});
            if (bit != 0 && bit != 1) throw ValidationError("evaluator returned a non-bit value");
            const double term = w * static_cast<double>(bit) - comp;
            const double next = acc + term;
            comp = (next - acc) - term;
            acc = next;
        }
    }
    if (acc < 0.0) acc = 0.0;
    if (acc > 1.0) acc = 1.0;
    return acc;
}

bool exact_delta_claim(const WorldSpec& spec, const ModelScorer& scorer, const Evaluator& ev,
                       double delta) {
    return exact_expected_L(spec, scorer, ev) <= delta;
}

}  // namespace creativity
