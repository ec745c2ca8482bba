#include "creativity/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "creativity/errors.hpp"

namespace creativity {

namespace {

using nlohmann::json;

void require_object(const json& doc, const std::string& what) {
    if (!doc.is_object()) throw ValidationError(what + ": expected a JSON object");
}

void check_keys(const json& doc, const std::vector<std::string>& required,
                const std::vector<std::string>& optional, const std::string& what) {
    require_object(doc, what);
    for (const auto& item : doc.items()) {
        const std::string& key = item.key();
        const bool known =
            std::find(required.begin(), required.end(), key) != required.end() ||
            std::find(optional.begin(), optional.end(), key) != optional.end();
        if (!known) throw ValidationError(what + ": unknown field \"" + key + "\"");
    }
    for (const std::string& key : required)
        if (!doc.contains(key)) throw ValidationError(what + ": missing field \"" + key + "\"");
}

std::uint32_t get_u32(const json& doc, const char* key, const std::string& what) {
    const json& v = doc.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ValidationError(what + ": field \"" + key + "\" must be an integer");
    const std::int64_t raw = v.get<std::int64_t>();
    if (raw < 0 || raw > std::numeric_limits<std::uint32_t>::max())
        throw ValidationError(what + ": field \"" + key + "\" out of range");
    return static_cast<std::uint32_t>(raw);
}

std::uint64_t get_u64(const json& doc, const char* key, const std::string& what) {
    const json& v = doc.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const std::int64_t raw = v.get<std::int64_t>();
        if (raw < 0) throw ValidationError(what + ": field \"" + key + "\" must be non-negative");
        return static_cast<std::uint64_t>(raw);
    }
    throw ValidationError(what + ": field \"" + key + "\" must be an integer");
}

double get_real(const json& doc, const char* key, const std::string& what) {
    const json& v = doc.at(key);
    if (!v.is_number()) throw ValidationError(what + ": field \"" + key + "\" must be a number");
    return v.get<double>();
}

std::vector<double> get_real_vector(const json& v, const std::string& what) {
    if (!v.is_array()) throw ValidationError(what + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& item : v) {
        if (!item.is_number()) throw ValidationError(what + ": expected an array of numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

std::vector<Token> get_token_vector(const json& v, const std::string& what) {
    if (!v.is_array()) throw ValidationError(what + ": expected an array of integers");
    std::vector<Token> out;
    out.reserve(v.size());
    for (const json& item : v) {
        if (!item.is_number_integer() && !item.is_number_unsigned())
            throw ValidationError(what + ": expected an array of integers");
        const std::int64_t raw = item.get<std::int64_t>();
        if (raw < 0 || raw > std::numeric_limits<Token>::max())
            throw ValidationError(what + ": token value out of range");
        out.push_back(static_cast<Token>(raw));
    }
    return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file for reading: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error("read failure on file: " + path);
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw Error("write failure on file: " + path);
}

WorldSpec world_from_json(const json& doc) {
    const std::string what = "world";
    check_keys(doc,
               {"num_creators", "num_prompts", "vocab_size", "seq_len", "window",
                "creator_weights", "prompt_weights", "info_map", "prompt_tokens",
                "conditional_law"},
               {"enumeration_cap"}, what);
    WorldSpec spec;
    spec.num_creators = get_u32(doc, "num_creators", what);
    spec.num_prompts = get_u32(doc, "num_prompts", what);
    spec.vocab_size = get_u32(doc, "vocab_size", what);
    spec.seq_len = get_u32(doc, "seq_len", what);
    spec.window = get_u32(doc, "window", what);
    if (doc.contains("enumeration_cap")) spec.enumeration_cap = get_u64(doc, "enumeration_cap", what);

    spec.creator_weights = get_real_vector(doc.at("creator_weights"), what + ".creator_weights");
    spec.prompt_weights = get_real_vector(doc.at("prompt_weights"), what + ".prompt_weights");

    const json& info_map = doc.at("info_map");
    if (!info_map.is_array()) throw ValidationError(what + ": info_map must be an array");
    for (const json& tokens : info_map)
        spec.info_map.push_back(get_token_vector(tokens, what + ".info_map"));

    const json& prompts = doc.at("prompt_tokens");
    if (!prompts.is_array()) throw ValidationError(what + ": prompt_tokens must be an array");
    for (const json& tokens : prompts)
        spec.prompt_tokens.push_back(get_token_vector(tokens, what + ".prompt_tokens"));

    const json& law = doc.at("conditional_law");
    if (!law.is_array()) throw ValidationError(what + ": conditional_law must be an array");
    const std::size_t pairs =
        static_cast<std::size_t>(spec.num_creators) * spec.num_prompts;
    spec.law.resize(pairs);
    std::vector<bool> seen(pairs, false);
    for (const json& entry : law) {
        check_keys(entry, {"creator", "prompt", "rows"}, {}, what + ".conditional_law[]");
        const std::uint32_t c = get_u32(entry, "creator", what);
        const std::uint32_t u = get_u32(entry, "prompt", what);
        if (c >= spec.num_creators || u >= spec.num_prompts)
            throw ValidationError(what + ": conditional_law entry for unknown (creator, prompt)");
        const std::size_t slot = static_cast<std::size_t>(c) * spec.num_prompts + u;
        if (seen[slot])
            throw ValidationError(what + ": duplicate conditional_law entry for creator " +
                                  std::to_string(c) + ", prompt " + std::to_string(u));
        seen[slot] = true;
        const json& rows = entry.at("rows");
        if (!rows.is_array()) throw ValidationError(what + ": rows must be an array");
        ConditionalTable table;
        table.rows.reserve(rows.size());
        for (const json& row : rows)
            table.rows.emplace_back(get_real_vector(row, what + ".conditional_law[].rows"));
        spec.law[slot] = std::move(table);
    }
    for (std::size_t slot = 0; slot < pairs; ++slot)
        if (!seen[slot])
            throw ValidationError(what + ": conditional_law misses a (creator, prompt) pair");
    spec.validate();
    return spec;
}

OrderedJson world_to_json(const WorldSpec& spec) {
    OrderedJson doc;
    doc["num_creators"] = spec.num_creators;
    doc["num_prompts"] = spec.num_prompts;
    doc["vocab_size"] = spec.vocab_size;
    doc["seq_len"] = spec.seq_len;
    doc["window"] = spec.window;
    doc["enumeration_cap"] = spec.enumeration_cap;
    doc["creator_weights"] = spec.creator_weights;
    doc["prompt_weights"] = spec.prompt_weights;
    doc["info_map"] = spec.info_map;
    doc["prompt_tokens"] = spec.prompt_tokens;
    OrderedJson law = OrderedJson::array();
    for (std::uint32_t c = 0; c < spec.num_creators; ++c) {
        for (std::uint32_t u = 0; u < spec.num_prompts; ++u) {
            OrderedJson entry;
            entry["creator"] = c;
            entry["prompt"] = u;
            OrderedJson rows = OrderedJson::array();
            for (const FiniteDistribution& row : spec.table(c, u).rows) rows.push_back(row.probs());
            entry["rows"] = std::move(rows);
            law.push_back(std::move(entry));
        }
    }
    doc["conditional_law"] = std::move(law);
    return doc;
}

WorldSpec load_world_file(const std::string& path) {
    const json doc = json::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded()) throw ValidationError("world file is not valid JSON: " + path);
    return world_from_json(doc);
}

void save_world_file(const WorldSpec& spec, const std::string& path) {
    write_text_file(path, world_to_json(spec).dump(2) + "\n");
}

std::vector<DatasetRecord> load_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset: " + path);
    std::vector<DatasetRecord> records;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string what = "dataset line " + std::to_string(line_no);
        const json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded()) throw ValidationError(what + ": not valid JSON");
        check_keys(doc, {"creator_id", "info"},
                   {"prompt", "creation", "evaluator_bit", "entropy"}, what);
        DatasetRecord rec;
        rec.line = line_no;
        rec.creator_id = get_u32(doc, "creator_id", what);
        rec.info = get_token_vector(doc.at("info"), what + ".info");
        if (doc.contains("prompt")) rec.prompt = get_token_vector(doc.at("prompt"), what + ".prompt");
        if (doc.contains("creation"))
            rec.creation = get_token_vector(doc.at("creation"), what + ".creation");
        if (doc.contains("evaluator_bit")) {
            const json& bit = doc.at("evaluator_bit");
            if (!bit.is_number_integer() && !bit.is_number_unsigned())
                throw ValidationError(what + ": evaluator_bit must be 0 or 1");
            const std::int64_t value = bit.get<std::int64_t>();
            if (value != 0 && value != 1)
                throw ValidationError(what + ": evaluator_bit must be 0 or 1");
            rec.evaluator_bit = static_cast<int>(value);
        }
        if (doc.contains("entropy")) {
            const double h = get_real(doc, "entropy", what);
            if (!std::isfinite(h) || h < 0.0)
                throw ValidationError(what + ": entropy must be finite and non-negative");
            rec.entropy = h;
        }
        records.push_back(std::move(rec));
    }
    if (in.bad()) throw Error("read failure on dataset: " + path);
    return records;
}

void validate_dataset(const std::vector<DatasetRecord>& records, MetricKind mode,
                      const WorldSpec* world, std::optional<std::uint32_t> vocab) {
    if (records.empty()) throw DomainError("dataset is empty");
    const bool bits = mode == MetricKind::E0 || mode == MetricKind::E2;
    const bool prompts = mode == MetricKind::E2 || mode == MetricKind::E3;
    const std::optional<std::uint32_t> alphabet =
        world ? std::optional<std::uint32_t>(world->vocab_size) : vocab;
    for (const DatasetRecord& rec : records) {
        const std::string what = "dataset line " + std::to_string(rec.line);
        if (bits) {
            if (!rec.evaluator_bit) throw ValidationError(what + ": mode needs evaluator_bit");
            if (rec.creation) throw ValidationError(what + ": creation does not belong in a bit mode");
            if (rec.entropy) throw ValidationError(what + ": entropy does not belong in a bit mode");
        } else {
            if (!rec.creation) throw ValidationError(what + ": mode needs a creation");
            if (rec.evaluator_bit)
                throw ValidationError(what + ": evaluator_bit does not belong in a likelihood mode");
            if (!world && !rec.entropy)
                throw ValidationError(what +
                                      ": entropy is required when no world supplies it exactly");
        }
        if (prompts && !rec.prompt) throw ValidationError(what + ": mode needs a prompt");
        if (!prompts && rec.prompt)
            throw ValidationError(what + ": prompt does not belong in a promptless mode");
        if (rec.creation && alphabet) {
            for (Token tok : *rec.creation)
                if (static_cast<std::uint32_t>(tok) >= *alphabet)
                    throw ValidationError(what + ": creation token outside the alphabet");
        }
        if (world) {
            if (rec.creator_id >= world->num_creators)
                throw ValidationError(what + ": unknown creator id");
            if (rec.info != world->info_map[rec.creator_id])
                throw ValidationError(what + ": info tokens disagree with the world's creator");
            if (rec.creation && rec.creation->size() != world->seq_len)
                throw ValidationError(what + ": creation length disagrees with the world");
            if (rec.prompt) {
                bool found = false;
                for (const auto& tokens : world->prompt_tokens)
                    if (tokens == *rec.prompt) {
                        found = true;
                        break;
                    }
                if (!found) throw ValidationError(what + ": prompt tokens unknown to the world");
            }
            if (!prompts && world->num_prompts != 1)
                throw ValidationError(what +
                                      ": promptless mode against a world with several prompts");
        }
    }
}

WeightedSample weighted_sample_from_record(const DatasetRecord& rec, MetricKind mode,
                                           const WorldSpec* world) {
    const std::string what = "dataset line " + std::to_string(rec.line);
    if (!rec.creation) throw ValidationError(what + ": mode needs a creation");
    WeightedSample sample;
    sample.creation.tokens = *rec.creation;
    sample.info.tokens = rec.info;

    if (rec.prompt) sample.prompt.tokens = *rec.prompt;
    if (world) {
        if (mode == MetricKind::E1) {
            if (world->num_prompts != 1)
                throw ValidationError(what + ": promptless mode against a multi-prompt world");
            sample.prompt = prompt_of(*world, 0);
        } else {
            std::vector<std::uint32_t> matches;
            for (std::uint32_t u = 0; u < world->num_prompts; ++u)
                if (world->prompt_tokens[u] == sample.prompt.tokens) matches.push_back(u);
            if (matches.empty())
                throw ValidationError(what + ": prompt tokens unknown to the world");
            sample.prompt.id = matches.front();
            if (matches.size() > 1 && !rec.entropy) {
                const double first = entropy(
                    sequence_distribution(*world, Creator{rec.creator_id}, prompt_of(*world, matches[0])));
                for (std::size_t i = 1; i < matches.size(); ++i) {
                    const double other = entropy(sequence_distribution(
                        *world, Creator{rec.creator_id}, prompt_of(*world, matches[i])));
                    if (other != first)
                        throw ValidationError(
                            what + ": prompt tokens are ambiguous between world prompts with "
                                   "different laws; supply the entropy field");
                }
            }
        }
    }

    if (rec.entropy) {
        sample.entropy_nats = *rec.entropy;
    } else if (world) {
        sample.entropy_nats = entropy(sequence_distribution(
            *world, Creator{rec.creator_id}, prompt_of(*world, sample.prompt.id)));
    } else {
        throw ValidationError(what + ": entropy is required when no world supplies it exactly");
    }
    return sample;
}

MetricKind metric_kind_from_name(const std::string& name) {
    if (name == "e0" || name == "E0") return MetricKind::E0;
    if (name == "e1" || name == "E1") return MetricKind::E1;
    if (name == "e2" || name == "E2") return MetricKind::E2;
    if (name == "e3" || name == "E3") return MetricKind::E3;
    throw DomainError("unknown metric mode: " + name);
}

CertificateKind certificate_kind_from_name(const std::string& name) {
    if (name == "thm1") return CertificateKind::theorem1;
    if (name == "thm2") return CertificateKind::theorem2;
    if (name == "cor2") return CertificateKind::corollary2;
    if (name == "cor3") return CertificateKind::corollary3;
    throw DomainError("unknown certificate kind: " + name);
}

ScorerFamilySpec scorer_family_from_json(const json& doc) {
    const std::string what = "scorer";
    require_object(doc, what);
    if (!doc.contains("family")) throw ValidationError(what + ": missing field \"family\"");
    const std::string family = doc.at("family").get<std::string>();
    ScorerFamilySpec spec;
    if (family == "truth") {
        check_keys(doc, {"family"}, {}, what);
        spec.family = ScorerFamily::truth;
    } else if (family == "uniform_mix") {
        check_keys(doc, {"family", "lambda"}, {}, what);
        spec.family = ScorerFamily::uniform_mix;
        spec.lambda = get_real(doc, "lambda", what);
    } else if (family == "fitted") {
        check_keys(doc, {"family", "epsilon", "fit_samples"}, {}, what);
        spec.family = ScorerFamily::fitted;
        spec.epsilon = get_real(doc, "epsilon", what);
        spec.fit_samples = get_u64(doc, "fit_samples", what);
    } else {
        throw DomainError(what + ": unknown family \"" + family + "\"");
    }
    return spec;
}

SimulateConfig load_simulate_config(const std::string& path) {
    const std::string what = "simulate config";
    const OrderedJson doc = OrderedJson::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded()) throw ValidationError(what + " is not valid JSON: " + path);
    check_keys(doc, {"world", "scorer", "certificate", "delta", "t", "tau", "n", "trials", "seed"},
               {"m_bound", "jobs"}, what);

    SimulateConfig out;
    out.raw = doc;
    const OrderedJson& world = doc.at("world");
    WorldSpec spec;
    if (world.is_string()) {
        namespace fs = std::filesystem;
        fs::path world_path(world.get<std::string>());
        if (world_path.is_relative()) world_path = fs::path(path).parent_path() / world_path;
        out.world_path = world_path.string();
        spec = load_world_file(out.world_path);
    } else {
        spec = world_from_json(world);
    }
    out.trial.spec = std::make_shared<const WorldSpec>(std::move(spec));
    out.trial.scorer = scorer_family_from_json(doc.at("scorer"));
    out.trial.certificate = certificate_kind_from_name(doc.at("certificate").get<std::string>());
    out.trial.delta = get_real(doc, "delta", what);
    out.trial.t = get_real(doc, "t", what);
    out.trial.tau = get_real(doc, "tau", what);
    out.trial.n = get_u64(doc, "n", what);
    out.trial.trials = get_u64(doc, "trials", what);
    out.trial.master_seed = get_u64(doc, "seed", what);
    if (doc.contains("m_bound")) out.trial.m_bound = get_real(doc, "m_bound", what);
    if (doc.contains("jobs")) out.trial.jobs = get_u32(doc, "jobs", what);
    return out;
}

OrderedJson real_to_json(double value) {
    if (std::isnan(value)) return OrderedJson("nan");
    if (std::isinf(value)) return OrderedJson(value > 0 ? "infinity" : "-infinity");
    return OrderedJson(value);
}

double real_from_json(const json& value, const char* what) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        const std::string text = value.get<std::string>();
        if (text == "infinity") return std::numeric_limits<double>::infinity();
        if (text == "-infinity") return -std::numeric_limits<double>::infinity();
        if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ValidationError(std::string(what) + ": expected a real number");
}

OrderedJson metric_to_json(const MetricValue& metric) {
    OrderedJson doc;
    doc["kind"] = metric_kind_name(metric.kind);
    doc["value"] = real_to_json(metric.value);
    doc["n"] = metric.n;
    if (metric.r_min_used) doc["r_min_used"] = real_to_json(*metric.r_min_used);
    if (metric.m_observed) doc["m_observed"] = real_to_json(*metric.m_observed);
    return doc;
}

MetricValue metric_from_json(const json& doc) {
    const std::string what = "metric";
    check_keys(doc, {"kind", "value", "n"}, {"r_min_used", "m_observed"}, what);
    MetricValue metric;
    metric.kind = metric_kind_from_name(doc.at("kind").get<std::string>());
    metric.value = real_from_json(doc.at("value"), "metric.value");
    metric.n = get_u64(doc, "n", what);
    if (doc.contains("r_min_used"))
        metric.r_min_used = real_from_json(doc.at("r_min_used"), "metric.r_min_used");
    if (doc.contains("m_observed"))
        metric.m_observed = real_from_json(doc.at("m_observed"), "metric.m_observed");
    return metric;
}

OrderedJson certificate_to_json(const CertificateResult& result) {
    OrderedJson doc;
    doc["certified"] = result.certified;
    if (result.required_n) doc["required_n"] = *result.required_n;
    if (result.margin) doc["margin"] = real_to_json(*result.margin);
    doc["statement"] = result.statement;
    return doc;
}

OrderedJson coverage_to_json(const CoverageReport& report) {
    OrderedJson doc;
    doc["trials_run"] = report.trials_run;
    doc["trials_certified"] = report.trials_certified;
    doc["certified_and_claim_false"] = report.certified_and_claim_false;
    doc["failure_rate"] = real_to_json(report.failure_rate);
    doc["monte_carlo_bound"] = real_to_json(report.monte_carlo_bound);
    doc["m_bound_used"] = real_to_json(report.m_bound_used);
    doc["r_min_used"] = real_to_json(report.r_min_used);
    OrderedJson trials = OrderedJson::array();
    for (const TrialOutcome& out : report.trials) {
        OrderedJson entry;
        entry["seed"] = out.seed;
        entry["metric"] = real_to_json(out.metric_value);
        entry["certified"] = out.certified;
        entry["exact_expected_l"] = real_to_json(out.exact_expected_l);
        entry["claim_true"] = out.claim_true;
        trials.push_back(std::move(entry));
    }
    doc["trials"] = std::move(trials);
    return doc;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char byte : text) {
        hash ^= byte;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string fnv1a64_hex(const std::string& text) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t hash = fnv1a64(text);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
        hash >>= 4;
    }
    return out;
}

}  // namespace creativity
