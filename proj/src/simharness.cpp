#include "creativity/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <thread>
#include <unordered_map>
#include <utility>

#include "creativity/errors.hpp"
#include "creativity/metrics.hpp"
#include "creativity/rng.hpp"

namespace creativity {

namespace {

// smooth(empirical frequency, eps); an unobserved context (total == 0) gets
// the uniform frequency, which smoothing maps back to uniform.
std::vector<double> smoothed_row(const std::vector<double>& counts, double total, double eps) {
    const double v = static_cast<double>(counts.size());
    std::vector<double> probs(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double freq = total > 0.0 ? counts[i] / total : 1.0 / v;
        probs[i] = (freq + eps) / (1.0 + v * eps);
    }
    return probs;
}

class FittedScorer final : public ModelScorer {
public:
    FittedScorer(const std::vector<std::tuple<Creation, Prompt, Creator>>& samples,
                 const WorldSpec& spec, double eps, bool pooled)
        : vocab_(spec.vocab_size),
          window_(spec.window),
          states_(prefix_state_count(spec.vocab_size, spec.window)),
          pooled_(pooled),
          uniform_(FiniteDistribution::uniform(spec.vocab_size)) {
        if (!(eps > 0.0)) throw DomainError("empirical fit: smoothing must be positive");
        std::map<std::uint64_t, std::vector<double>> counts;
        for (const auto& [x, u, c] : samples) {
            if (x.tokens.size() != spec.seq_len)
                throw DimensionError("empirical fit: creation length does not match the world");
            const Info info = information_of(spec, c);
            const std::uint64_t slot = pooled_ ? 0 : intern_context(info.tokens, u.tokens);
            for (std::uint32_t t = 0; t < spec.seq_len; ++t) {
                const Token tok = x.tokens[t];
                if (tok < 0 || static_cast<std::uint32_t>(tok) >= vocab_)
                    throw DomainError("empirical fit: creation token outside the alphabet");
                const std::uint32_t win = std::min(window_, t);
                const std::span<const Token> prefix(x.tokens.data() + (t - win), win);
                auto& row = counts[slot * states_ + prefix_state_index(vocab_, prefix)];
                if (row.empty()) row.assign(vocab_, 0.0);
                row[static_cast<std::size_t>(tok)] += 1.0;
            }
        }
        for (auto& [key, row] : counts) {
            double total = 0.0;
            for (double c : row) total += c;
            rows_.emplace(key, FiniteDistribution(smoothed_row(row, total, eps)));
        }
    }

    FiniteDistribution next_token_dist(const Info& info, const Prompt& prompt,
                                       std::span<const Token> prefix) const override {
        std::uint64_t slot = 0;
        if (!pooled_) {
            const auto it = contexts_.find(ContextKey{info.tokens, prompt.tokens});
            if (it == contexts_.end()) return uniform_;
            slot = it->second;
        }
        const std::size_t win = std::min<std::size_t>(window_, prefix.size());
        const auto windowed = prefix.subspan(prefix.size() - win, win);
        const auto row = rows_.find(slot * states_ + prefix_state_index(vocab_, windowed));
        return row == rows_.end() ? uniform_ : row->second;
    }

private:
    using ContextKey = std::pair<std::vector<Token>, std::vector<Token>>;

    std::uint64_t intern_context(const std::vector<Token>& info, const std::vector<Token>& prompt) {
        const auto [it, inserted] =
            contexts_.try_emplace(ContextKey{info, prompt}, contexts_.size());
        (void)inserted;
        return it->second;
    }

    std::uint32_t vocab_;
    std::uint32_t window_;
    std::uint64_t states_;
    bool pooled_;
    FiniteDistribution uniform_;
    std::map<ContextKey, std::uint64_t> contexts_;
    std::unordered_map<std::uint64_t, FiniteDistribution> rows_;
};

// Per-trial bit cache: one scorer per trial, so bits are keyed by the
// (prompt, creator) pair alone.
class MemoEvaluator final : public Evaluator {
public:
    MemoEvaluator(const Evaluator& inner, std::uint32_t num_creators, std::uint32_t num_prompts)
        : inner_(inner),
          num_creators_(num_creators),
          bits_(static_cast<std::size_t>(num_creators) * num_prompts, -1) {}

    int judge(const ModelScorer& scorer, const Prompt& u, const Creator& c) const override {
        auto& slot = bits_[static_cast<std::size_t>(u.id) * num_creators_ + c.id];
        if (slot < 0) slot = static_cast<signed char>(inner_.judge(scorer, u, c));
        return slot;
    }

private:
    const Evaluator& inner_;
    std::uint32_t num_creators_;
    mutable std::vector<signed char> bits_;
};

bool bit_certificate(CertificateKind kind) {
    return kind == CertificateKind::theorem1 || kind == CertificateKind::corollary2;
}

bool prompt_aware(CertificateKind kind) {
    return kind == CertificateKind::corollary2 || kind == CertificateKind::corollary3;
}

// Largest NLL the scorer can realize on a creation the world can actually
// produce, by full enumeration.
double supported_nll_sup(const WorldSpec& spec, const ModelScorer& scorer) {
    double sup = 0.0;
    const std::uint64_t total = creation_count(spec);
    for (std::uint32_t c = 0; c < spec.num_creators; ++c) {
        if (spec.creator_weights[c] <= 0.0) continue;
        const Info info = information_of(spec, Creator{c});
        for (std::uint32_t ui = 0; ui < spec.num_prompts; ++ui) {
            if (spec.prompt_weights[ui] <= 0.0) continue;
            const Prompt u = prompt_of(spec, ui);
            const FiniteDistribution truth = sequence_distribution(spec, Creator{c}, u);
            for (std::uint64_t i = 0; i < total; ++i) {
                if (truth.prob(i) <= 0.0) continue;
                const Creation x = creation_at(spec, i);
                sup = std::max(sup, sequence_nll(scorer, x, u, info, spec.window).total);
            }
        }
    }
    return sup;
}

double auto_m_bound(const TrialConfig& cfg, const ModelScorer* fixed_scorer) {
    const WorldSpec& spec = *cfg.spec;
    const double v = static_cast<double>(spec.vocab_size);
    const double seq = static_cast<double>(spec.seq_len);
    switch (cfg.scorer.family) {
        case ScorerFamily::fitted:
            return seq * std::log((1.0 + v * cfg.scorer.epsilon) / cfg.scorer.epsilon);
        case ScorerFamily::uniform_mix:
            if (cfg.scorer.lambda > 0.0) return seq * std::log(v / cfg.scorer.lambda);
            [[fallthrough]];
        case ScorerFamily::truth: {
            const double sup = supported_nll_sup(spec, *fixed_scorer);
            if (!std::isfinite(sup))
                throw DomainError("coverage: scorer has unbounded likelihood on supported creations");
            return sup > 0.0 ? sup : 1.0;
        }
    }
    throw DomainError("coverage: unknown scorer family");
}

struct SharedState {
    EvaluatorPtr evaluator;
    ScorerPtr fixed_scorer;  // null when each trial fits its own
    double m_bound = 0.0;
    double r_min = 0.0;
    double fixed_exact_e_l = 0.0;
    std::vector<int> fixed_bits;  // per prompt-major (u, c) slot, fixed scorer only
};

std::vector<std::tuple<Creation, Prompt, Creator>> draw_fit_sample(const WorldSpec& spec,
                                                                  std::uint64_t count,
                                                                  RandomStream& rng) {
    std::vector<std::tuple<Creation, Prompt, Creator>> samples;
    samples.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const Creator c = draw_creator(spec, rng);
        const Prompt u = draw_prompt(spec, rng);
        Creation x = draw_creation(spec, c, u, rng);
        samples.emplace_back(std::move(x), u, c);
    }
    return samples;
}

TrialOutcome run_one_trial(const TrialConfig& cfg, const SharedState& shared,
                           std::uint64_t trial_index) {
    const WorldSpec& spec = *cfg.spec;
    TrialOutcome out;
    out.seed = derive_seed(cfg.master_seed, trial_index);
    RandomStream rng(out.seed);

    // Draw order is part of the reproducibility contract: the training sample
    // (fitted family only) comes first, then the metric sample.
    ScorerPtr scorer = shared.fixed_scorer;
    if (!scorer)
        scorer = fit_empirical_model(draw_fit_sample(spec, cfg.scorer.fit_samples, rng), spec,
                                     cfg.scorer.epsilon);

    const MemoEvaluator memo(*shared.evaluator, spec.num_creators, spec.num_prompts);
    const auto bit_for = [&](const Prompt& u, Creator c) {
        if (!shared.fixed_bits.empty())
            return shared.fixed_bits[static_cast<std::size_t>(u.id) * spec.num_creators + c.id];
        return memo.judge(*scorer, u, c);
    };

    MetricValue metric;
    CertificateResult cert;
    switch (cfg.certificate) {
        case CertificateKind::theorem1: {
            const Prompt u0 = prompt_of(spec, 0);
            std::vector<int> bits;
            bits.reserve(cfg.n);
            for (std::uint64_t i = 0; i < cfg.n; ++i)
                bits.push_back(bit_for(u0, draw_creator(spec, rng)));
            metric = e0(bits);
            cert = certify_theorem1(metric, cfg.delta, cfg.t);
            break;
        }
        case CertificateKind::corollary2: {
            std::vector<int> bits;
            bits.reserve(cfg.n);
            for (std::uint64_t i = 0; i < cfg.n; ++i) {
                const Creator c = draw_creator(spec, rng);
                const Prompt u = draw_prompt(spec, rng);
                bits.push_back(bit_for(u, c));
            }
            metric = e2(bits);
            cert = certify_corollary2(metric, cfg.delta, cfg.t);
            break;
        }
        case CertificateKind::theorem2: {
            const Prompt u0 = prompt_of(spec, 0);
            std::vector<std::pair<Creation, Creator>> pairs;
            pairs.reserve(cfg.n);
            for (std::uint64_t i = 0; i < cfg.n; ++i) {
                const Creator c = draw_creator(spec, rng);
                pairs.emplace_back(draw_creation(spec, c, u0, rng), c);
            }
            metric = e1(pairs, *scorer, spec, cfg.tau, spec.window);
            cert = certify_theorem2(metric, cfg.delta, cfg.t, shared.m_bound, shared.r_min);
            break;
        }
        case CertificateKind::corollary3: {
            std::vector<std::tuple<Creation, Prompt, Creator>> triples;
            triples.reserve(cfg.n);
            for (std::uint64_t i = 0; i < cfg.n; ++i) {
                const Creator c = draw_creator(spec, rng);
                const Prompt u = draw_prompt(spec, rng);
                Creation x = draw_creation(spec, c, u, rng);
                triples.emplace_back(std::move(x), u, c);
            }
            metric = e3(triples, *scorer, spec, cfg.tau, spec.window);
            cert = certify_corollary3(metric, cfg.delta, cfg.t, shared.m_bound, shared.r_min);
            break;
        }
    }

    out.metric_value = metric.value;
    out.certified = cert.certified;
    out.exact_expected_l = shared.fixed_scorer ? shared.fixed_exact_e_l
                                               : exact_expected_L(spec, *scorer, memo);
    out.claim_true = out.exact_expected_l <= cfg.delta;
    return out;
}

}  // namespace

const char* scorer_family_name(ScorerFamily family) {
    switch (family) {
        case ScorerFamily::truth: return "truth";
        case ScorerFamily::uniform_mix: return "uniform_mix";
        case ScorerFamily::fitted: return "fitted";
    }
    return "unknown";
}

void TrialConfig::validate() const {
    if (!spec) throw ValidationError("coverage: missing world");
    spec->validate();
    if (trials < 1) throw DomainError("coverage: trial count must be at least 1");
    if (n < 1) throw DomainError("coverage: samples per trial must be at least 1");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("coverage: delta must lie in (0, 1)");
    if (!(t > 0.0 && t < 1.0)) throw DomainError("coverage: t must lie in (0, 1)");
    if (!(tau > 0.0)) throw DomainError("coverage: tau must be positive");
    switch (scorer.family) {
        case ScorerFamily::truth:
            break;
        case ScorerFamily::uniform_mix:
            if (!(scorer.lambda >= 0.0 && scorer.lambda <= 1.0))
                throw DomainError("coverage: mixing weight must lie in [0, 1]");
            break;
        case ScorerFamily::fitted:
            if (!(scorer.epsilon > 0.0))
                throw DomainError("coverage: fitted smoothing must be positive");
            if (scorer.fit_samples < 1)
                throw DomainError("coverage: fitted family needs at least 1 training draw");
            break;
    }
    if (m_bound && !(*m_bound > 0.0))
        throw DomainError("coverage: explicit NLL ceiling must be positive");
    // The promptless certificates need a world whose prompt is degenerate.
    if (!prompt_aware(certificate) && spec->num_prompts != 1)
        throw DomainError(
            "coverage: theorem1/theorem2 need a single-prompt world; use the "
            "prompt-aware certificate instead");
}

double monte_carlo_bound(double t, std::uint64_t trials) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("monte_carlo_bound: t must lie in (0, 1)");
    if (trials < 1) throw DomainError("monte_carlo_bound: trial count must be at least 1");
    return t + 3.0 * std::sqrt(t * (1.0 - t) / static_cast<double>(trials));
}

CoverageReport run_coverage_experiment(const TrialConfig& cfg) {
    cfg.validate();
    const WorldSpec& spec = *cfg.spec;

    SharedState shared;
    shared.evaluator = kl_threshold_evaluator(cfg.spec, cfg.tau);
    if (cfg.scorer.family == ScorerFamily::truth)
        shared.fixed_scorer = scorer_from_world(cfg.spec);
    else if (cfg.scorer.family == ScorerFamily::uniform_mix)
        shared.fixed_scorer = mix_with_uniform(scorer_from_world(cfg.spec), cfg.scorer.lambda);

    if (!bit_certificate(cfg.certificate)) {
        shared.r_min = r_min_exact(spec, cfg.tau);
        shared.m_bound =
            cfg.m_bound ? *cfg.m_bound : auto_m_bound(cfg, shared.fixed_scorer.get());
    }
    if (shared.fixed_scorer) {
        shared.fixed_exact_e_l = exact_expected_L(spec, *shared.fixed_scorer, *shared.evaluator);
        if (bit_certificate(cfg.certificate)) {
            shared.fixed_bits.resize(static_cast<std::size_t>(spec.num_creators) *
                                     spec.num_prompts);
            for (std::uint32_t ui = 0; ui < spec.num_prompts; ++ui) {
                const Prompt u = prompt_of(spec, ui);
                for (std::uint32_t c = 0; c < spec.num_creators; ++c)
                    shared.fixed_bits[static_cast<std::size_t>(ui) * spec.num_creators + c] =
                        shared.evaluator->judge(*shared.fixed_scorer, u, Creator{c});
            }
        }
    }

    std::vector<TrialOutcome> outcomes(cfg.trials);
    std::atomic<std::uint64_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= cfg.trials) return;
            try {
                outcomes[i] = run_one_trial(cfg, shared, i);
            } catch (...) {
                const std::lock_guard<std::mutex> guard(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(cfg.trials);
                return;
            }
        }
    };

    std::uint32_t jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : cfg.jobs;
    jobs = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(jobs, cfg.trials));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (std::uint32_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    CoverageReport report;
    report.trials_run = cfg.trials;
    for (const TrialOutcome& out : outcomes) {
        if (out.certified) {
            ++report.trials_certified;
            if (!out.claim_true) ++report.certified_and_claim_false;
        }
    }
    report.failure_rate = static_cast<double>(report.certified_and_claim_false) /
                          static_cast<double>(std::max<std::uint64_t>(report.trials_certified, 1));
    report.monte_carlo_bound = monte_carlo_bound(cfg.t, cfg.trials);
    report.m_bound_used = shared.m_bound;
    report.r_min_used = shared.r_min;
    report.trials = std::move(outcomes);
    return report;
}

ScorerPtr fit_empirical_model(const std::vector<std::tuple<Creation, Prompt, Creator>>& samples,
                              const WorldSpec& spec, double eps) {
    return std::make_shared<FittedScorer>(samples, spec, eps, /*pooled=*/false);
}

ScorerPtr fit_marginal_model(const std::vector<std::tuple<Creation, Prompt, Creator>>& samples,
                             const WorldSpec& spec, double eps) {
    return std::make_shared<FittedScorer>(samples, spec, eps, /*pooled=*/true);
}

TrainingReport run_training_experiment(const WorldSpec& spec,
                                       const std::vector<ScorerPtr>& scorer_class,
                                       std::uint64_t train_n, double delta, double tau,
                                       std::uint64_t seed) {
    spec.validate();
    if (scorer_class.empty()) throw DomainError("training: the scorer class is empty");
    for (const ScorerPtr& q : scorer_class)
        if (!q) throw ValidationError("training: null scorer in the class");
    if (train_n < 1) throw DomainError("training: training size must be at least 1");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("training: delta must lie in (0, 1)");
    if (!(tau > 0.0)) throw DomainError("training: tau must be positive");

    // Non-owning view; the evaluator never outlives this call.
    const std::shared_ptr<const WorldSpec> spec_view(std::shared_ptr<const WorldSpec>(), &spec);
    const EvaluatorPtr ev = kl_threshold_evaluator(spec_view, tau);

    RandomStream rng(derive_seed(seed, 0));
    const auto samples = draw_fit_sample(spec, train_n, rng);

    // Exact conditional entropies, shared by every per-sample weight.
    std::vector<double> ent(static_cast<std::size_t>(spec.num_creators) * spec.num_prompts,
                            -1.0);
    const auto weight_for = [&](const Prompt& u, Creator c) {
        auto& h = ent[static_cast<std::size_t>(u.id) * spec.num_creators + c.id];
        if (h < 0.0) h = entropy(sequence_distribution(spec, c, u));
        return r_weight(tau, h);
    };

    TrainingReport report;
    report.class_size = scorer_class.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t qi = 0; qi < scorer_class.size(); ++qi) {
        std::vector<double> terms;
        terms.reserve(samples.size());
        bool infinite = false;
        for (const auto& [x, u, c] : samples) {
            const NllBreakdown nll =
                sequence_nll(*scorer_class[qi], x, u, information_of(spec, c), spec.window);
            if (std::isinf(nll.total)) {
                infinite = true;
                break;
            }
            terms.push_back(nll.total / weight_for(u, c));
        }
        const double value = infinite
                                 ? std::numeric_limits<double>::infinity()
                                 : pairwise_sum(terms) / static_cast<double>(samples.size());
        if (value < best) {
            best = value;
            report.selected_index = qi;
        }
    }
    if (std::isinf(best))
        throw DomainError("training: every class member has infinite NLL on the sample");
    report.train_e_weighted = best;

    double m_class = 0.0;
    for (const ScorerPtr& q : scorer_class) m_class = std::max(m_class, supported_nll_sup(spec, *q));
    if (!std::isfinite(m_class))
        throw DomainError("training: class member with unbounded likelihood on supported creations");
    report.m_bound = m_class > 0.0 ? m_class : 1.0;
    report.r_min = r_min_exact(spec, tau);
    report.rhs = corollary4_exact_rhs(report.train_e_weighted, train_n, delta, report.class_size,
                                      report.m_bound, report.r_min);
    report.vacuous = report.rhs >= 1.0;

    const ModelScorer& selected = *scorer_class[report.selected_index];
    report.exact_p_s = exact_expected_L(spec, selected, *ev);
    const Creator fresh_c = draw_creator(spec, rng);
    const Prompt fresh_u = draw_prompt(spec, rng);
    report.drawn_bit = ev->judge(selected, fresh_u, fresh_c);
    report.violated = static_cast<double>(report.drawn_bit) > report.rhs;
    return report;
}

ContrastReport marginalization_contrast_experiment(const WorldSpec& spec, std::uint64_t train_n,
                                                   double eps, double tau, std::uint64_t seed) {
    spec.validate();
    if (spec.num_creators < 2)
        throw DomainError("contrast: needs at least two creators to tell apart");
    if (train_n < 1) throw DomainError("contrast: training size must be at least 1");

    const std::shared_ptr<const WorldSpec> spec_view(std::shared_ptr<const WorldSpec>(), &spec);
    const EvaluatorPtr ev = kl_threshold_evaluator(spec_view, tau);

    RandomStream rng(derive_seed(seed, 0));
    const auto samples = draw_fit_sample(spec, train_n, rng);
    const ScorerPtr conditional = fit_empirical_model(samples, spec, eps);
    const ScorerPtr marginal = fit_marginal_model(samples, spec, eps);

    ContrastReport report;
    report.conditional_expected_l = exact_expected_L(spec, *conditional, *ev);
    report.marginal_expected_l = exact_expected_L(spec, *marginal, *ev);
    report.difference = report.marginal_expected_l - report.conditional_expected_l;
    return report;
}

}  // namespace creativity
