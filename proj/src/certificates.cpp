#include "creativity/certificates.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "creativity/errors.hpp"

namespace creativity {

namespace {

constexpr double kThresholdTolerance = 1e-12;

void require_unit_interval(double value, const char* name) {
    if (!(value > 0.0 && value < 1.0))
        throw DomainError(std::string(name) + " must lie strictly inside (0, 1)");
}

// Smallest integer n that clears the threshold with the documented 1e-12
// relative tolerance.  Rounding is always upward so borderline arithmetic can
// only withhold a certificate, never grant one.
std::uint64_t required_n_from_threshold(double threshold) {
    double padded = threshold + kThresholdTolerance * std::max(1.0, std::abs(threshold));
    if (padded >= 9.2e18) return std::numeric_limits<std::uint64_t>::max();
    double up = std::ceil(padded);
    return up < 1.0 ? 1 : static_cast<std::uint64_t>(up);
}

const char* population_name(CertificateKind kind) {
    return (kind == CertificateKind::theorem1 || kind == CertificateKind::theorem2)
               ? "D_C"
               : "D_{U,C}";
}

std::string render_statement(CertificateKind kind, const MetricValue& metric, double delta,
                             double t, bool certified,
                             std::optional<std::uint64_t> required_n) {
    std::ostringstream out;
    out << (certified ? "certified" : "not certified") << ": delta-creativity at delta=" << delta
        << " w.r.t. L under " << population_name(kind) << " with confidence 1-t=" << (1.0 - t)
        << " (" << metric_kind_name(metric.kind) << "=" << metric.value << ", n=" << metric.n;
    if (required_n)
        out << ", required_n=" << *required_n;
    else
        out << ", required_n undefined: metric does not beat delta";
    out << ")";
    return out.str();
}

CertificateResult certify_mean_bound(CertificateKind kind, const MetricValue& metric,
                                     double delta, double t, double ratio) {
    require_unit_interval(delta, "delta");
    require_unit_interval(t, "t");
    CertificateResult out;
    if (std::isfinite(metric.value) && metric.value < delta) {
        double gap = delta - metric.value;
        double threshold = ratio * ratio * std::log(1.0 / t) / (2.0 * gap * gap);
        out.required_n = required_n_from_threshold(threshold);
        out.margin = static_cast<double>(metric.n) - static_cast<double>(*out.required_n);
        out.certified = metric.n >= *out.required_n;
    }
    out.statement = render_statement(kind, metric, delta, t, out.certified, out.required_n);
    return out;
}

void require_kind(const MetricValue& metric, MetricKind expected, const char* op) {
    if (metric.kind != expected)
        throw DomainError(std::string(op) + " expects a " + metric_kind_name(expected) +
                          " metric, got " + metric_kind_name(metric.kind));
}

// The declared (M, r_min) pair must be consistent with what the metric saw.
// An infinite metric can never certify, so it short-circuits to a plain
// not-certified verdict before the consistency checks.
void require_weight_preconditions(const MetricValue& metric, double m_bound, double r_min) {
    if (!(m_bound > 0.0)) throw DomainError("M must be positive");
    if (!(r_min > 0.0)) throw DomainError("r_min must be positive");
    if (std::isinf(metric.value)) return;
    if (metric.m_observed && m_bound < *metric.m_observed - 1e-12 * std::max(1.0, m_bound))
        throw BoundViolationError("declared M=" + std::to_string(m_bound) +
                                  " is below the observed per-sequence NLL maximum " +
                                  std::to_string(*metric.m_observed));
    if (metric.r_min_used && r_min > *metric.r_min_used + 1e-12 * std::max(1.0, r_min))
        throw WeightViolationError("declared r_min=" + std::to_string(r_min) +
                                   " exceeds the observed weight minimum " +
                                   std::to_string(*metric.r_min_used));
}

}  // namespace

const char* certificate_kind_name(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::theorem1: return "thm1";
        case CertificateKind::theorem2: return "thm2";
        case CertificateKind::corollary2: return "cor2";
        case CertificateKind::corollary3: return "cor3";
    }
    return "?";
}

CertificateResult certify_theorem1(const MetricValue& metric, double delta, double t) {
    require_kind(metric, MetricKind::E0, "certify_theorem1");
    return certify_mean_bound(CertificateKind::theorem1, metric, delta, t, 1.0);
}

CertificateResult certify_theorem2(const MetricValue& metric, double delta, double t,
                                   double m_bound, double r_min) {
    require_kind(metric, MetricKind::E1, "certify_theorem2");
    require_weight_preconditions(metric, m_bound, r_min);
    return certify_mean_bound(CertificateKind::theorem2, metric, delta, t, m_bound / r_min);
}

CertificateResult certify_corollary2(const MetricValue& metric, double delta, double t) {
    require_kind(metric, MetricKind::E2, "certify_corollary2");
    return certify_mean_bound(CertificateKind::corollary2, metric, delta, t, 1.0);
}

CertificateResult certify_corollary3(const MetricValue& metric, double delta, double t,
                                     double m_bound, double r_min) {
    require_kind(metric, MetricKind::E3, "certify_corollary3");
    require_weight_preconditions(metric, m_bound, r_min);
    return certify_mean_bound(CertificateKind::corollary3, metric, delta, t, m_bound / r_min);
}

CertificateResult certify(const CertificateInput& input) {
    switch (input.kind) {
        case CertificateKind::theorem1:
            return certify_theorem1(input.metric, input.delta, input.t);
        case CertificateKind::corollary2:
            return certify_corollary2(input.metric, input.delta, input.t);
        case CertificateKind::theorem2:
        case CertificateKind::corollary3:
            if (!input.m_bound || !input.r_min)
                throw DomainError("weighted-likelihood certificates need both M and r_min");
            if (input.kind == CertificateKind::theorem2)
                return certify_theorem2(input.metric, input.delta, input.t, *input.m_bound,
                                        *input.r_min);
            return certify_corollary3(input.metric, input.delta, input.t, *input.m_bound,
                                      *input.r_min);
    }
    throw DomainError("unknown certificate kind");
}

std::uint64_t min_n_theorem1(double e_value, double delta, double t) {
    return min_n_theorem2(e_value, delta, t, 1.0, 1.0);
}

std::uint64_t min_n_theorem2(double e_value, double delta, double t, double m_bound,
                             double r_min) {
    require_unit_interval(delta, "delta");
    require_unit_interval(t, "t");
    if (!(m_bound > 0.0) || !(r_min > 0.0))
        throw DomainError("M and r_min must be positive");
    if (!(e_value >= 0.0)) throw DomainError("metric value must be non-negative");
    if (!(e_value < delta))
        throw InfeasibleError("no sample size certifies: metric value does not beat delta");
    double ratio = m_bound / r_min;
    double gap = delta - e_value;
    return required_n_from_threshold(ratio * ratio * std::log(1.0 / t) / (2.0 * gap * gap));
}

double achievable_delta(double e_value, std::uint64_t n, double t, std::optional<double> m_bound,
                        std::optional<double> r_min) {
    require_unit_interval(t, "t");
    if (n < 1) throw DomainError("n must be at least 1");
    if (!std::isfinite(e_value) || e_value < 0.0)
        throw DomainError("metric value must be finite and non-negative");
    if (m_bound.has_value() != r_min.has_value())
        throw DomainError("M and r_min must be supplied together");
    double ratio = 1.0;
    if (m_bound) {
        if (!(*m_bound > 0.0) || !(*r_min > 0.0))
            throw DomainError("M and r_min must be positive");
        ratio = *m_bound / *r_min;
    }
    return e_value + ratio * std::sqrt(std::log(1.0 / t) / (2.0 * static_cast<double>(n)));
}

double q_finite_class(std::uint64_t class_size, double t) {
    if (class_size < 1) throw DomainError("class size must be at least 1");
    require_unit_interval(t, "t");
    return std::log(static_cast<double>(class_size) / t);
}

double q_norm_based(double norm_bound, std::uint32_t depth,
                    const std::vector<double>& frobenius_bounds, double t) {
    if (!(norm_bound > 0.0)) throw DomainError("norm bound must be positive");
    if (depth < 1) throw DomainError("depth must be at least 1");
    if (frobenius_bounds.size() != depth)
        throw DimensionError("expected one Frobenius bound per layer");
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("t must lie in (0, 1]");
    double product = 1.0;
    for (double b : frobenius_bounds) {
        if (!(b > 0.0)) throw DomainError("Frobenius bounds must be positive");
        product *= b * b;
    }
    return norm_bound * norm_bound * static_cast<double>(depth) * product + std::log(1.0 / t);
}

double q_robustness(double lipschitz_c, double covering_number, double t) {
    if (!(lipschitz_c >= 0.0) || !(covering_number >= 0.0))
        throw DomainError("robustness inputs must be non-negative");
    require_unit_interval(t, "t");
    return lipschitz_c * lipschitz_c + covering_number + std::log(1.0 / t);
}

double q_info_theoretic(const std::vector<std::pair<double, double>>& mi_pairs, double t) {
    if (mi_pairs.empty()) throw DomainError("at least one mutual-information pair is required");
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("t must lie in (0, 1]");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [cond_mi, weight_mi] : mi_pairs) {
        if (!(cond_mi >= 0.0) || !(weight_mi >= 0.0))
            throw DomainError("mutual-information estimates must be non-negative");
        best = std::min(best, cond_mi + weight_mi);
    }
    return best + std::log(1.0 / t);
}

double QProvider::value(double t) const {
    switch (kind) {
        case Kind::finite_class: return q_finite_class(class_size, t);
        case Kind::norm_based: return q_norm_based(norm_bound, depth, frobenius_bounds, t);
        case Kind::robustness: return q_robustness(lipschitz_c, covering_number, t);
        case Kind::info_theoretic: return q_info_theoretic(mi_pairs, t);
    }
    throw DomainError("unknown capacity provider kind");
}

std::string QProvider::describe() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::finite_class: out << "finite_class(size=" << class_size << ")"; break;
        case Kind::norm_based:
            out << "norm_based(B=" << norm_bound << ", depth=" << depth << ")";
            break;
        case Kind::robustness:
            out << "robustness(c=" << lipschitz_c << ", covering=" << covering_number << ")";
            break;
        case Kind::info_theoretic: out << "info_theoretic(pairs=" << mi_pairs.size() << ")"; break;
    }
    return out.str();
}

QProvider make_q_finite_class(std::uint64_t class_size) {
    QProvider q;
    q.kind = QProvider::Kind::finite_class;
    q.class_size = class_size;
    return q;
}

QProvider make_q_norm_based(double norm_bound, std::uint32_t depth,
                            std::vector<double> frobenius_bounds) {
    QProvider q;
    q.kind = QProvider::Kind::norm_based;
    q.norm_bound = norm_bound;
    q.depth = depth;
    q.frobenius_bounds = std::move(frobenius_bounds);
    return q;
}

QProvider make_q_robustness(double lipschitz_c, double covering_number) {
    QProvider q;
    q.kind = QProvider::Kind::robustness;
    q.lipschitz_c = lipschitz_c;
    q.covering_number = covering_number;
    return q;
}

QProvider make_q_info_theoretic(std::vector<std::pair<double, double>> mi_pairs) {
    QProvider q;
    q.kind = QProvider::Kind::info_theoretic;
    q.mi_pairs = std::move(mi_pairs);
    return q;
}

double corollary4_bound(double train_e, std::uint64_t n, double delta, const QProvider& q,
                        double gap_constant, bool weighted, std::optional<double> r_min) {
    require_unit_interval(delta, "delta");
    if (n < 1) throw DomainError("n must be at least 1");
    if (!(train_e >= 0.0)) throw DomainError("training loss must be non-negative");
    if (!(gap_constant > 0.0)) throw DomainError("gap constant must be positive");
    double first;
    if (weighted) {
        first = 2.0 / delta * train_e;
    } else {
        if (!r_min) throw DomainError("the unweighted bound needs r_min");
        if (!(*r_min > 0.0)) throw DomainError("r_min must be positive");
        first = 2.0 / (delta * *r_min) * train_e;
    }
    double capacity = q.value(delta / 2.0);
    if (!(capacity >= 0.0)) throw DomainError("capacity term must be non-negative");
    double second =
        gap_constant * std::sqrt(capacity / (delta * delta * static_cast<double>(n)));
    return first + second;
}

double corollary4_exact_rhs(double train_e_weighted, std::uint64_t n, double delta,
                            std::uint64_t class_size, double m_bound, double r_min) {
    require_unit_interval(delta, "delta");
    if (n < 1) throw DomainError("n must be at least 1");
    if (class_size < 1) throw DomainError("class size must be at least 1");
    if (!(train_e_weighted >= 0.0)) throw DomainError("training loss must be non-negative");
    if (!(m_bound > 0.0) || !(r_min > 0.0)) throw DomainError("M and r_min must be positive");
    double gap = (m_bound / r_min) *
                 std::sqrt(std::log(static_cast<double>(class_size) / (delta / 2.0)) /
                           (2.0 * static_cast<double>(n)));
    return 2.0 / delta * (train_e_weighted + gap);
}

}  // namespace creativity
