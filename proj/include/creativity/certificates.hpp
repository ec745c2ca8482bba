#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "creativity/metrics.hpp"

namespace creativity {

enum class CertificateKind { theorem1, theorem2, corollary2, corollary3 };

const char* certificate_kind_name(CertificateKind kind);

struct CertificateInput {
    MetricValue metric;
    CertificateKind kind = CertificateKind::theorem1;
    double delta = 0.0;
    double t = 0.0;
    std::optional<double> m_bound;  // weighted-likelihood certificates only
    std::optional<double> r_min;
};

struct CertificateResult {
    bool certified = false;
    // Smallest sample count at which this metric value certifies; absent when
    // the metric does not beat delta at any n.
    std::optional<std::uint64_t> required_n;
    std::optional<double> margin;  // n - required_n
    std::string statement;
};

// Mean-bits certificate: certifies when value < delta and
// n >= ln(1/t) / (2 (delta - value)^2).  Thresholds are rounded up, and a
// computed threshold within 1e-12 (relative) of the sample count is treated
// as not met: the certificate never over-claims on arithmetic noise.
CertificateResult certify_theorem1(const MetricValue& metric, double delta, double t);

// Weighted-likelihood certificate: threshold scaled by (M/r_min)^2.  The
// declared M must dominate the observed per-sequence NLL maximum and the
// declared r_min must lower-bound the observed weights; violations raise
// BoundViolationError / WeightViolationError respectively.
CertificateResult certify_theorem2(const MetricValue& metric, double delta, double t,
                                   double m_bound, double r_min);

// Prompt-conditioned versions; identical arithmetic over E2 / E3.
CertificateResult certify_corollary2(const MetricValue& metric, double delta, double t);
CertificateResult certify_corollary3(const MetricValue& metric, double delta, double t,
                                     double m_bound, double r_min);

CertificateResult certify(const CertificateInput& input);

std::uint64_t min_n_theorem1(double e_value, double delta, double t);
std::uint64_t min_n_theorem2(double e_value, double delta, double t, double m_bound,
                             double r_min);

// Exact certifiability boundary at fixed n: delta* = E + (M/r_min) *
// sqrt(ln(1/t) / (2n)); certification fires for delta > delta* and not below.
double achievable_delta(double e_value, std::uint64_t n, double t,
                        std::optional<double> m_bound = std::nullopt,
                        std::optional<double> r_min = std::nullopt);

// Capacity terms for the two-term generalization bound.
double q_finite_class(std::uint64_t class_size, double t);
double q_norm_based(double norm_bound, std::uint32_t depth,
                    const std::vector<double>& frobenius_bounds, double t);
double q_robustness(double lipschitz_c, double covering_number, double t);
double q_info_theoretic(const std::vector<std::pair<double, double>>& mi_pairs, double t);

struct QProvider {
    enum class Kind { finite_class, norm_based, robustness, info_theoretic };
    Kind kind = Kind::finite_class;
    std::uint64_t class_size = 0;
    double norm_bound = 0.0;
    std::uint32_t depth = 0;
    std::vector<double> frobenius_bounds;
    double lipschitz_c = 0.0;
    double covering_number = 0.0;
    std::vector<std::pair<double, double>> mi_pairs;

    double value(double t) const;
    std::string describe() const;
};

QProvider make_q_finite_class(std::uint64_t class_size);
QProvider make_q_norm_based(double norm_bound, std::uint32_t depth,
                            std::vector<double> frobenius_bounds);
QProvider make_q_robustness(double lipschitz_c, double covering_number);
QProvider make_q_info_theoretic(std::vector<std::pair<double, double>> mi_pairs);

// Two-term high-probability bound on the population failure rate of a trained
// scorer: 2/delta * train_E + gap_constant * sqrt(Q(delta/2) / (delta^2 n)).
// weighted=true reads train_E as the 1/r(z)-weighted training NLL; with
// weighted=false train_E is the raw training NLL and the first term becomes
// 2 / (delta * r_min) * train_E, so r_min is required.
double corollary4_bound(double train_e, std::uint64_t n, double delta, const QProvider& q,
                        double gap_constant, bool weighted,
                        std::optional<double> r_min = std::nullopt);

// Non-asymptotic right side for a finite scorer class: 2/delta * (train_E_w +
// (M/r_min) * sqrt(ln(class_size/(delta/2)) / (2n))).  This is the form the
// simulation harness verifies end-to-end.
double corollary4_exact_rhs(double train_e_weighted, std::uint64_t n, double delta,
                            std::uint64_t class_size, double m_bound, double r_min);

}  // namespace creativity
