#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "creativity/certificates.hpp"
#include "creativity/evaluator.hpp"
#include "creativity/scoring.hpp"
#include "creativity/world.hpp"

namespace creativity {

// Which model stands in for "the AI" in a simulated trial.
enum class ScorerFamily { truth, uniform_mix, fitted };

struct ScorerFamilySpec {
    ScorerFamily family = ScorerFamily::truth;
    double lambda = 0.0;            // uniform_mix: mixing weight in [0, 1]
    double epsilon = 0.0;           // fitted: smoothing, must be > 0
    std::uint64_t fit_samples = 0;  // fitted: training draws per trial
};

const char* scorer_family_name(ScorerFamily family);

struct TrialConfig {
    std::shared_ptr<const WorldSpec> spec;
    ScorerFamilySpec scorer;
    CertificateKind certificate = CertificateKind::theorem1;
    double delta = 0.0;
    double t = 0.0;
    double tau = 0.0;
    // Almost-sure NLL ceiling for thm2/cor3.  Absent -> derived automatically:
    // the smoothing ceiling T*ln((1+V*eps)/eps) for fitted scorers,
    // T*ln(V/lambda) for uniform mixtures, and the exact supremum over
    // supported creations for the truth scorer.
    std::optional<double> m_bound;
    std::uint64_t n = 0;       // samples per trial
    std::uint64_t trials = 0;  // R
    std::uint64_t master_seed = 0;
    std::uint32_t jobs = 1;  // worker threads; 0 -> hardware concurrency

    void validate() const;
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    double metric_value = 0.0;
    bool certified = false;
    double exact_expected_l = 0.0;  // exact E[L] for this trial's scorer
    bool claim_true = false;        // exact_expected_l <= delta
};

struct CoverageReport {
    std::uint64_t trials_run = 0;
    std::uint64_t trials_certified = 0;
    std::uint64_t certified_and_claim_false = 0;  // failures
    double failure_rate = 0.0;       // failures / max(certified, 1)
    double monte_carlo_bound = 0.0;  // t + 3*sqrt(t*(1-t)/R)
    double m_bound_used = 0.0;       // 0 when the certificate takes no M
    double r_min_used = 0.0;         // 0 when the certificate takes no r_min
    std::vector<TrialOutcome> trials;
};

// Repeated certify-then-check trials.  Each trial draws its own metric sample
// (and, for fitted scorers, its own training sample) from a seed derived from
// (master_seed, trial index), attempts the configured certificate, and checks
// the certified claim against exact enumeration.  A failure is a trial that
// certified while the exact claim is false.
CoverageReport run_coverage_experiment(const TrialConfig& cfg);

// Smoothed empirical next-token model: per (info, prompt, windowed prefix)
// context, row = smooth(observed frequencies, eps); contexts never observed
// fall back to uniform.
ScorerPtr fit_empirical_model(const std::vector<std::tuple<Creation, Prompt, Creator>>& samples,
                              const WorldSpec& spec, double eps);

// Same estimator with creator and prompt conditioning pooled away: one table
// keyed by windowed prefix alone.
ScorerPtr fit_marginal_model(const std::vector<std::tuple<Creation, Prompt, Creator>>& samples,
                             const WorldSpec& spec, double eps);

struct TrainingReport {
    std::uint64_t class_size = 0;
    std::uint64_t selected_index = 0;  // argmin of empirical weighted NLL
    double train_e_weighted = 0.0;
    double m_bound = 0.0;      // sup NLL over the class and supported creations
    double r_min = 0.0;        // exact population weight floor
    double rhs = 0.0;          // two-term bound on the failure probability
    bool vacuous = false;      // rhs >= 1: the bound cannot be violated
    double exact_p_s = 0.0;    // exact P[L=1] for the selected scorer
    int drawn_bit = 0;         // L on one fresh draw of (prompt, creator)
    bool violated = false;     // drawn_bit exceeds rhs
};

// One seeded run of the train-then-bound protocol: draw a training sample of
// size train_n, pick the class member minimizing the empirical weighted NLL,
// evaluate the two-term bound with the exact finite-class gap, and compare it
// against a fresh draw of the evaluator bit.
TrainingReport run_training_experiment(const WorldSpec& spec,
                                       const std::vector<ScorerPtr>& scorer_class,
                                       std::uint64_t train_n, double delta, double tau,
                                       std::uint64_t seed);

struct ContrastReport {
    double conditional_expected_l = 0.0;
    double marginal_expected_l = 0.0;
    double difference = 0.0;  // marginal - conditional
};

// Fits the conditional and the pooled estimator on one shared draw and
// reports the exact failure probability of each under the same KL evaluator.
ContrastReport marginalization_contrast_experiment(const WorldSpec& spec, std::uint64_t train_n,
                                                   double eps, double tau, std::uint64_t seed);

// t + 3*sqrt(t*(1-t)/R), the acceptance oracle for coverage runs.
double monte_carlo_bound(double t, std::uint64_t trials);

}  // namespace creativity
