#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "creativity/certificates.hpp"
#include "creativity/errors.hpp"
#include "creativity/external_scorer.hpp"
#include "creativity/io.hpp"
#include "creativity/metrics.hpp"
#include "creativity/scoring.hpp"
#include "creativity/simharness.hpp"
#include "creativity/world.hpp"

namespace {

using creativity::CertificateInput;
using creativity::CertificateKind;
using creativity::CertificateResult;
using creativity::FiniteDistribution;
using creativity::Info;
using creativity::MetricKind;
using creativity::MetricValue;
using creativity::ModelScorer;
using creativity::OrderedJson;
using creativity::Prompt;
using creativity::QProvider;
using creativity::ScorerPtr;
using creativity::Token;
using creativity::WorldSpec;

constexpr int kExitCertified = 0;
constexpr int kExitNotCertified = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPrecondition = 3;

// The embedded command drops execution-only flags (--jobs, --out): they do
// not affect any computed value, so replayed reports stay byte-identical
// regardless of worker count or output location.
std::string filtered_command_line(int argc, char** argv) {
    std::string out = "creativity";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--jobs" || arg == "--out") {
            ++i;
            continue;
        }
        if (arg.rfind("--jobs=", 0) == 0 || arg.rfind("--out=", 0) == 0) continue;
        out += ' ';
        out += arg;
    }
    return out;
}

OrderedJson base_report(const std::string& command, const OrderedJson& inputs) {
    OrderedJson doc;
    doc["tool"] = "creativity";
    doc["version"] = creativity::kToolVersion;
    doc["command"] = command;
    doc["config_hash"] = creativity::fnv1a64_hex(inputs.dump());
    doc["inputs"] = inputs;
    return doc;
}

void emit(const OrderedJson& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        creativity::write_text_file(out_path, text);
}

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("CREATIVITY_CERT_SEED");
    if (!raw || !*raw) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long value = std::strtoull(raw, &end, 10);
    if (errno != 0 || end == raw || *end != '\0')
        throw creativity::DomainError("CREATIVITY_CERT_SEED is not an unsigned integer");
    return static_cast<std::uint64_t>(value);
}

class UniformScorer final : public ModelScorer {
public:
    explicit UniformScorer(std::uint32_t vocab) : row_(FiniteDistribution::uniform(vocab)) {}
    FiniteDistribution next_token_dist(const Info&, const Prompt&,
                                       std::span<const Token>) const override {
        return row_;
    }

private:
    FiniteDistribution row_;
};

// --scorer accepts: truth | uniform | mix:LAMBDA | external:COMMAND
ScorerPtr build_scorer(const std::string& desc, std::shared_ptr<const WorldSpec> world,
                       std::uint32_t vocab) {
    if (desc == "truth") {
        if (!world) throw creativity::DomainError("--scorer truth needs --world");
        return creativity::scorer_from_world(std::move(world));
    }
    if (desc == "uniform") return std::make_shared<UniformScorer>(vocab);
    if (desc.rfind("mix:", 0) == 0) {
        if (!world) throw creativity::DomainError("--scorer mix needs --world");
        const double lambda = std::stod(desc.substr(4));
        return creativity::mix_with_uniform(creativity::scorer_from_world(std::move(world)),
                                            lambda);
    }
    if (desc.rfind("external:", 0) == 0) {
        const std::string command = desc.substr(9);
        if (command.empty())
            throw creativity::DomainError("--scorer external: needs a command to run");
        return creativity::external_scorer(creativity::split_command(command), vocab);
    }
    throw creativity::DomainError("unknown scorer \"" + desc +
                                  "\" (expected truth, uniform, mix:L, external:CMD)");
}

MetricKind default_metric_kind(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::theorem1: return MetricKind::E0;
        case CertificateKind::theorem2: return MetricKind::E1;
        case CertificateKind::corollary2: return MetricKind::E2;
        case CertificateKind::corollary3: return MetricKind::E3;
    }
    return MetricKind::E0;
}

bool weighted_certificate(CertificateKind kind) {
    return kind == CertificateKind::theorem2 || kind == CertificateKind::corollary3;
}

OrderedJson standard_notes() {
    OrderedJson notes = OrderedJson::array();
    notes.push_back(
        "the command field omits --jobs and --out; neither affects computed values");
    return notes;
}

struct EvaluateArgs {
    std::string dataset;
    std::string mode;
    std::string world;
    std::string scorer = "truth";
    std::string out;
    double tau = 0.0;
    bool tau_given = false;
    std::uint32_t omega = 0;
    bool omega_given = false;
    std::uint32_t vocab = 0;
    bool vocab_given = false;
};

int cmd_evaluate(const EvaluateArgs& a, const std::string& command) {
    const MetricKind kind = creativity::metric_kind_from_name(a.mode);
    std::shared_ptr<const WorldSpec> world;
    if (!a.world.empty())
        world = std::make_shared<const WorldSpec>(creativity::load_world_file(a.world));
    const std::optional<std::uint32_t> vocab_flag =
        a.vocab_given ? std::optional<std::uint32_t>(a.vocab) : std::nullopt;

    const auto records = creativity::load_dataset_file(a.dataset);
    creativity::validate_dataset(records, kind, world.get(), vocab_flag);

    OrderedJson inputs;
    inputs["subcommand"] = "evaluate";
    inputs["dataset"] = a.dataset;
    inputs["mode"] = creativity::metric_kind_name(kind);
    if (world) inputs["world"] = a.world;

    MetricValue metric;
    if (kind == MetricKind::E0 || kind == MetricKind::E2) {
        std::vector<int> bits;
        bits.reserve(records.size());
        for (const auto& rec : records) bits.push_back(*rec.evaluator_bit);
        metric = kind == MetricKind::E0 ? creativity::e0(bits) : creativity::e2(bits);
    } else {
        if (!a.tau_given)
            throw creativity::DomainError("--tau is required for the likelihood metrics");
        if (!world && !a.vocab_given)
            throw creativity::DomainError("--vocab is required when no --world is given");
        const std::uint32_t vocab = world ? world->vocab_size : a.vocab;
        if (!a.omega_given && !world)
            throw creativity::DomainError("--omega is required when no --world is given");
        const std::uint32_t omega = a.omega_given ? a.omega : world->window;
        inputs["scorer"] = a.scorer;
        inputs["tau"] = a.tau;
        inputs["omega"] = omega;
        inputs["vocab"] = vocab;

        const ScorerPtr scorer = build_scorer(a.scorer, world, vocab);
        std::vector<creativity::WeightedSample> samples;
        samples.reserve(records.size());
        for (const auto& rec : records)
            samples.push_back(creativity::weighted_sample_from_record(rec, kind, world.get()));
        metric = creativity::weighted_nll_metric(kind, samples, *scorer, a.tau, omega);
    }

    OrderedJson doc = base_report(command, inputs);
    doc["metric"] = creativity::metric_to_json(metric);
    doc["notes"] = standard_notes();
    emit(doc, a.out);
    return kExitCertified;
}

struct CertifyArgs {
    std::string report;
    std::string cert;
    std::string mode;
    std::string out;
    double value = 0.0;
    bool value_given = false;
    std::uint64_t n = 0;
    bool n_given = false;
    double delta = 0.0;
    double t = 0.0;
    double m_bound = 0.0;
    bool m_given = false;
    double r_min = 0.0;
    bool r_given = false;
};

int cmd_certify(const CertifyArgs& a, const std::string& command) {
    const CertificateKind kind = creativity::certificate_kind_from_name(a.cert);
    MetricValue metric;
    if (!a.report.empty()) {
        if (a.value_given || a.n_given)
            throw creativity::DomainError("give either --report or --value/--n, not both");
        const OrderedJson doc =
            OrderedJson::parse(creativity::read_text_file(a.report), nullptr, false);
        if (doc.is_discarded())
            throw creativity::ValidationError("report is not valid JSON: " + a.report);
        if (!doc.contains("metric"))
            throw creativity::ValidationError("report carries no metric: " + a.report);
        metric = creativity::metric_from_json(doc.at("metric"));
    } else {
        if (!a.value_given || !a.n_given)
            throw creativity::DomainError("certify needs --report or both --value and --n");
        metric.kind = a.mode.empty() ? default_metric_kind(kind)
                                     : creativity::metric_kind_from_name(a.mode);
        metric.value = a.value;
        metric.n = a.n;
    }
    if (weighted_certificate(kind) && (!a.m_given || !a.r_given))
        throw creativity::DomainError(std::string(creativity::certificate_kind_name(kind)) +
                                      " needs --m-bound and --r-min");

    CertificateInput input;
    input.metric = metric;
    input.kind = kind;
    input.delta = a.delta;
    input.t = a.t;
    if (a.m_given) input.m_bound = a.m_bound;
    if (a.r_given) input.r_min = a.r_min;
    const CertificateResult result = creativity::certify(input);

    OrderedJson inputs;
    inputs["subcommand"] = "certify";
    inputs["certificate"] = a.cert;
    inputs["metric"] = creativity::metric_to_json(metric);
    inputs["delta"] = a.delta;
    inputs["t"] = a.t;
    if (a.m_given) inputs["m_bound"] = a.m_bound;
    if (a.r_given) inputs["r_min"] = a.r_min;

    OrderedJson doc = base_report(command, inputs);
    doc["certificate"] = creativity::certificate_to_json(result);
    doc["notes"] = standard_notes();
    emit(doc, a.out);
    return result.certified ? kExitCertified : kExitNotCertified;
}

struct PlanArgs {
    std::string cert;
    std::string out;
    double value = 0.0;
    double delta = 0.0;
    double t = 0.0;
    double m_bound = 0.0;
    bool m_given = false;
    double r_min = 0.0;
    bool r_given = false;
    std::vector<std::uint64_t> n_grid = {100, 300, 1000, 3000, 10000, 30000, 100000};
};

int cmd_plan(const PlanArgs& a, const std::string& command) {
    const CertificateKind kind = creativity::certificate_kind_from_name(a.cert);
    const bool weighted = weighted_certificate(kind);
    if (weighted && (!a.m_given || !a.r_given))
        throw creativity::DomainError(std::string(creativity::certificate_kind_name(kind)) +
                                      " needs --m-bound and --r-min");
    const std::optional<double> m =
        weighted ? std::optional<double>(a.m_bound) : std::nullopt;
    const std::optional<double> r = weighted ? std::optional<double>(a.r_min) : std::nullopt;

    OrderedJson inputs;
    inputs["subcommand"] = "plan";
    inputs["certificate"] = a.cert;
    inputs["value"] = a.value;
    inputs["delta"] = a.delta;
    inputs["t"] = a.t;
    if (a.m_given) inputs["m_bound"] = a.m_bound;
    if (a.r_given) inputs["r_min"] = a.r_min;
    inputs["n_grid"] = a.n_grid;

    OrderedJson plan;
    bool feasible = true;
    try {
        const std::uint64_t required =
            weighted
                ? creativity::min_n_theorem2(a.value, a.delta, a.t, a.m_bound, a.r_min)
                : creativity::min_n_theorem1(a.value, a.delta, a.t);
        plan["feasible"] = true;
        plan["required_n"] = required;
    } catch (const creativity::InfeasibleError& e) {
        feasible = false;
        plan["feasible"] = false;
        plan["reason"] = e.what();
    }
    OrderedJson curve = OrderedJson::array();
    for (const std::uint64_t n : a.n_grid) {
        OrderedJson point;
        point["n"] = n;
        point["delta_star"] =
            creativity::real_to_json(creativity::achievable_delta(a.value, n, a.t, m, r));
        curve.push_back(std::move(point));
    }
    plan["achievable_delta"] = std::move(curve);

    OrderedJson doc = base_report(command, inputs);
    doc["plan"] = std::move(plan);
    doc["notes"] = standard_notes();
    emit(doc, a.out);
    return feasible ? kExitCertified : kExitNotCertified;
}

struct SimulateArgs {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::uint32_t jobs = 0;
    bool jobs_given = false;
};

int cmd_simulate(const SimulateArgs& a, const std::string& command) {
    creativity::SimulateConfig sc = creativity::load_simulate_config(a.config);
    if (a.jobs_given) sc.trial.jobs = a.jobs;
    if (a.seed_given) sc.trial.master_seed = a.seed;
    if (const auto seed = env_seed()) sc.trial.master_seed = *seed;

    const creativity::CoverageReport report = creativity::run_coverage_experiment(sc.trial);

    OrderedJson inputs;
    inputs["subcommand"] = "simulate";
    inputs["config"] = sc.raw;
    inputs["master_seed"] = sc.trial.master_seed;

    OrderedJson doc = base_report(command, inputs);
    doc["coverage"] = creativity::coverage_to_json(report);
    OrderedJson notes = standard_notes();
    notes.push_back(
        "the built-in evaluator is a two-sided KL threshold: emulation succeeds exactly "
        "when the sequence KL stays below tau");
    doc["notes"] = std::move(notes);
    emit(doc, a.out);
    return kExitCertified;
}

struct BoundArgs {
    std::string provider = "finite_class";
    std::string out;
    double train_e = 0.0;
    std::uint64_t n = 0;
    double delta = 0.0;
    double gap_constant = 1.0;
    bool unweighted = false;
    double r_min = 0.0;
    bool r_given = false;
    std::uint64_t class_size = 0;
    bool class_given = false;
    double norm_bound = 0.0;
    std::uint32_t depth = 0;
    std::vector<double> frobenius;
    double lipschitz = 0.0;
    double covering = 0.0;
    std::vector<double> mi_values;
    double m_bound = 0.0;
    bool m_given = false;
};

int cmd_bound(const BoundArgs& a, const std::string& command) {
    QProvider q;
    if (a.provider == "finite_class") {
        if (!a.class_given)
            throw creativity::DomainError("finite_class provider needs --class-size");
        q = creativity::make_q_finite_class(a.class_size);
    } else if (a.provider == "norm_based") {
        q = creativity::make_q_norm_based(a.norm_bound, a.depth, a.frobenius);
    } else if (a.provider == "robustness") {
        q = creativity::make_q_robustness(a.lipschitz, a.covering);
    } else if (a.provider == "info_theoretic") {
        if (a.mi_values.empty() || a.mi_values.size() % 2 != 0)
            throw creativity::DomainError(
                "info_theoretic provider needs --mi with an even number of values "
                "(conditional and weight terms, pairwise)");
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i + 1 < a.mi_values.size(); i += 2)
            pairs.emplace_back(a.mi_values[i], a.mi_values[i + 1]);
        q = creativity::make_q_info_theoretic(std::move(pairs));
    } else {
        throw creativity::DomainError("unknown Q provider: " + a.provider);
    }

    const std::optional<double> r =
        a.r_given ? std::optional<double>(a.r_min) : std::nullopt;
    const double rhs = creativity::corollary4_bound(a.train_e, a.n, a.delta, q,
                                                    a.gap_constant, !a.unweighted, r);

    OrderedJson inputs;
    inputs["subcommand"] = "bound";
    inputs["q_provider"] = a.provider;
    inputs["train_e"] = a.train_e;
    inputs["n"] = a.n;
    inputs["delta"] = a.delta;
    inputs["gap_constant"] = a.gap_constant;
    inputs["weighted"] = !a.unweighted;
    if (a.r_given) inputs["r_min"] = a.r_min;
    if (a.class_given) inputs["class_size"] = a.class_size;

    OrderedJson bound;
    bound["q_description"] = q.describe();
    bound["q_at_half_delta"] = creativity::real_to_json(q.value(a.delta / 2.0));
    bound["value"] = creativity::real_to_json(rhs);
    if (a.class_given && a.m_given && a.r_given)
        bound["exact_finite_class_rhs"] = creativity::real_to_json(creativity::corollary4_exact_rhs(
            a.train_e, a.n, a.delta, a.class_size, a.m_bound, a.r_min));

    OrderedJson doc = base_report(command, inputs);
    doc["bound"] = std::move(bound);
    doc["notes"] = standard_notes();
    emit(doc, a.out);
    return kExitCertified;
}

struct ScorerCheckArgs {
    std::string scorer;
    std::string out;
    std::uint32_t vocab = 0;
    int timeout_ms = 10000;
};

int cmd_scorer_check(const ScorerCheckArgs& a, const std::string& command) {
    if (a.scorer.rfind("external:", 0) != 0)
        throw creativity::DomainError("scorer-check needs --scorer external:COMMAND");
    const std::string cmd_text = a.scorer.substr(9);
    if (cmd_text.empty()) throw creativity::DomainError("scorer-check: empty command");
    const auto argv = creativity::split_command(cmd_text);
    const Token v = static_cast<Token>(a.vocab);

    OrderedJson check;
    OrderedJson inputs;
    inputs["subcommand"] = "scorer-check";
    inputs["scorer"] = a.scorer;
    inputs["vocab"] = a.vocab;
    OrderedJson doc = base_report(command, inputs);

    try {
        creativity::ExternalScorer first(argv, a.vocab, a.timeout_ms);
        creativity::ExternalScorer second(argv, a.vocab, a.timeout_ms);

        struct Probe {
            Info info;
            Prompt prompt;
            std::vector<Token> prefix;
        };
        std::vector<Probe> probes = {
            {Info{{v}}, Prompt{0, {}}, {}},
            {Info{{v}}, Prompt{0, {}}, {0}},
            {Info{{v, v + 1}}, Prompt{0, {v + 7}}, {v - 1 >= 0 ? v - 1 : 0}},
            {Info{{v + 2}}, Prompt{0, {}}, {0, 0}},
        };

        bool deterministic = true;
        for (const Probe& probe : probes) {
            const std::span<const Token> prefix(probe.prefix.data(), probe.prefix.size());
            const FiniteDistribution row_a =
                first.next_token_dist(probe.info, probe.prompt, prefix);
            const FiniteDistribution row_b =
                second.next_token_dist(probe.info, probe.prompt, prefix);
            if (!(row_a == row_b)) deterministic = false;
        }
        const std::uint64_t before = first.wire_exchanges();
        (void)first.next_token_dist(probes[0].info, probes[0].prompt,
                                    std::span<const Token>(probes[0].prefix.data(),
                                                           probes[0].prefix.size()));
        const bool cache_ok = first.wire_exchanges() == before;

        check["probes"] = probes.size();
        check["deterministic_across_processes"] = deterministic;
        check["cache_serves_repeats"] = cache_ok;
        check["wire_exchanges"] = first.wire_exchanges();
        const bool ok = deterministic && cache_ok;
        check["ok"] = ok;
        doc["scorer_check"] = std::move(check);
        doc["notes"] = standard_notes();
        emit(doc, a.out);
        return ok ? kExitCertified : kExitNotCertified;
    } catch (const creativity::ProtocolError& e) {
        check["ok"] = false;
        check["protocol_error"] = e.what();
        if (!e.payload.empty()) check["peer_payload"] = e.payload;
        doc["scorer_check"] = std::move(check);
        doc["notes"] = standard_notes();
        emit(doc, a.out);
        return kExitNotCertified;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistical creativity metrics, certificates and simulations"};
    app.require_subcommand(1);
    const std::string command = filtered_command_line(argc, argv);

    EvaluateArgs ev;
    CLI::App* evaluate = app.add_subcommand("evaluate", "compute a metric from a dataset");
    evaluate->add_option("--dataset", ev.dataset, "line-delimited JSON samples")->required();
    evaluate->add_option("--mode", ev.mode, "one of e0, e1, e2, e3")->required();
    evaluate->add_option("--world", ev.world, "world JSON for exact entropies and truth scorers");
    evaluate->add_option("--scorer", ev.scorer,
                         "truth | uniform | mix:LAMBDA | external:COMMAND (default truth)");
    evaluate->add_option("--out", ev.out, "write the report here instead of stdout");
    CLI::Option* ev_tau = evaluate->add_option("--tau", ev.tau, "evaluator threshold (nats)");
    CLI::Option* ev_omega = evaluate->add_option("--omega", ev.omega, "context window");
    CLI::Option* ev_vocab = evaluate->add_option("--vocab", ev.vocab, "creation alphabet size");

    CertifyArgs ce;
    CLI::App* certify = app.add_subcommand("certify", "decide a certificate from a metric");
    certify->add_option("--cert", ce.cert, "thm1 | thm2 | cor2 | cor3")->required();
    certify->add_option("--report", ce.report, "evaluate report to read the metric from");
    CLI::Option* ce_value = certify->add_option("--value", ce.value, "metric value");
    CLI::Option* ce_n = certify->add_option("--n", ce.n, "sample count");
    certify->add_option("--mode", ce.mode, "metric kind when given --value");
    certify->add_option("--delta", ce.delta, "creativity level in (0,1)")->required();
    certify->add_option("--t", ce.t, "confidence complement in (0,1)")->required();
    CLI::Option* ce_m = certify->add_option("--m-bound", ce.m_bound, "almost-sure NLL ceiling");
    CLI::Option* ce_r = certify->add_option("--r-min", ce.r_min, "population weight floor");
    certify->add_option("--out", ce.out, "write the report here instead of stdout");

    PlanArgs pl;
    CLI::App* plan = app.add_subcommand("plan", "required n and achievable delta curve");
    plan->add_option("--cert", pl.cert, "thm1 | thm2 | cor2 | cor3")->required();
    plan->add_option("--value", pl.value, "metric value")->required();
    plan->add_option("--delta", pl.delta, "creativity level in (0,1)")->required();
    plan->add_option("--t", pl.t, "confidence complement in (0,1)")->required();
    CLI::Option* pl_m = plan->add_option("--m-bound", pl.m_bound, "almost-sure NLL ceiling");
    CLI::Option* pl_r = plan->add_option("--r-min", pl.r_min, "population weight floor");
    plan->add_option("--n-grid", pl.n_grid, "sample counts for the achievable-delta curve");
    plan->add_option("--out", pl.out, "write the report here instead of stdout");

    SimulateArgs si;
    CLI::App* simulate = app.add_subcommand("simulate", "run a coverage experiment");
    simulate->add_option("--config", si.config, "simulate config JSON")->required();
    simulate->add_option("--out", si.out, "write the report here instead of stdout");
    CLI::Option* si_seed =
        simulate->add_option("--seed", si.seed, "override the config master seed");
    CLI::Option* si_jobs = simulate->add_option("--jobs", si.jobs,
                                                "worker threads (0 = hardware concurrency)");

    BoundArgs bo;
    CLI::App* bound = app.add_subcommand("bound", "two-term trained-model bound");
    bound->add_option("--q-provider", bo.provider,
                      "finite_class | norm_based | robustness | info_theoretic");
    bound->add_option("--train-e", bo.train_e, "training loss")->required();
    bound->add_option("--n", bo.n, "training sample count")->required();
    bound->add_option("--delta", bo.delta, "failure level in (0,1)")->required();
    bound->add_option("--gap-constant", bo.gap_constant, "constant on the gap term (default 1)");
    bound->add_flag("--unweighted", bo.unweighted,
                    "read --train-e as unweighted NLL (needs --r-min)");
    CLI::Option* bo_r = bound->add_option("--r-min", bo.r_min, "population weight floor");
    CLI::Option* bo_class = bound->add_option("--class-size", bo.class_size, "finite class size");
    bound->add_option("--norm-bound", bo.norm_bound, "norm_based: input norm bound");
    bound->add_option("--depth", bo.depth, "norm_based: network depth");
    bound->add_option("--frobenius", bo.frobenius, "norm_based: per-layer Frobenius bounds");
    bound->add_option("--lipschitz", bo.lipschitz, "robustness: Lipschitz constant");
    bound->add_option("--covering", bo.covering, "robustness: covering number");
    bound->add_option("--mi", bo.mi_values,
                      "info_theoretic: flat list of (conditional, weight) MI pairs");
    CLI::Option* bo_m =
        bound->add_option("--m-bound", bo.m_bound, "NLL ceiling for the exact finite-class form");
    bound->add_option("--out", bo.out, "write the report here instead of stdout");

    ScorerCheckArgs sc;
    CLI::App* scorer_check =
        app.add_subcommand("scorer-check", "validate an external scorer endpoint");
    scorer_check->add_option("--scorer", sc.scorer, "external:COMMAND")->required();
    scorer_check->add_option("--vocab", sc.vocab, "creation alphabet size")->required();
    scorer_check->add_option("--timeout-ms", sc.timeout_ms, "per-reply timeout");
    scorer_check->add_option("--out", sc.out, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    ev.tau_given = ev_tau->count() > 0;
    ev.omega_given = ev_omega->count() > 0;
    ev.vocab_given = ev_vocab->count() > 0;
    ce.value_given = ce_value->count() > 0;
    ce.n_given = ce_n->count() > 0;
    ce.m_given = ce_m->count() > 0;
    ce.r_given = ce_r->count() > 0;
    pl.m_given = pl_m->count() > 0;
    pl.r_given = pl_r->count() > 0;
    si.seed_given = si_seed->count() > 0;
    si.jobs_given = si_jobs->count() > 0;
    bo.r_given = bo_r->count() > 0;
    bo.class_given = bo_class->count() > 0;
    bo.m_given = bo_m->count() > 0;

    try {
        if (app.got_subcommand(evaluate)) return cmd_evaluate(ev, command);
        if (app.got_subcommand(certify)) return cmd_certify(ce, command);
        if (app.got_subcommand(plan)) return cmd_plan(pl, command);
        if (app.got_subcommand(simulate)) return cmd_simulate(si, command);
        if (app.got_subcommand(bound)) return cmd_bound(bo, command);
        if (app.got_subcommand(scorer_check)) return cmd_scorer_check(sc, command);
        std::cerr << "error: no subcommand given\n";
        return kExitUsage;
    } catch (const creativity::BoundViolationError& e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const creativity::WeightViolationError& e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const creativity::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitNotCertified;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
