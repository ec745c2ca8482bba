#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "creativity/certificates.hpp"
#include "creativity/metrics.hpp"
#include "creativity/simharness.hpp"
#include "creativity/world.hpp"

namespace creativity {

inline constexpr const char* kToolVersion = "1.0.0";

using OrderedJson = nlohmann::ordered_json;

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// World documents: a single JSON object with explicit sizes, weights, info
// token lists, and the full conditional law in canonical prefix order.
WorldSpec world_from_json(const nlohmann::json& doc);
OrderedJson world_to_json(const WorldSpec& spec);
WorldSpec load_world_file(const std::string& path);
void save_world_file(const WorldSpec& spec, const std::string& path);

// One line of a line-delimited JSON dataset.
struct DatasetRecord {
    std::uint64_t line = 0;  // source line, for error messages
    std::uint32_t creator_id = 0;
    std::vector<Token> info;
    std::optional<std::vector<Token>> prompt;
    std::optional<std::vector<Token>> creation;
    std::optional<int> evaluator_bit;
    std::optional<double> entropy;  // sequence-level, nats
};

std::vector<DatasetRecord> load_dataset_file(const std::string& path);

// Mode discipline: bit metrics need evaluator_bit and no creation; weighted
// metrics need creation and no evaluator_bit; prompt-aware modes need the
// prompt field, promptless modes forbid it.  With a world, token values are
// checked against its alphabet and info lists against its creators; without
// one, `vocab` (when given) bounds creation tokens.
void validate_dataset(const std::vector<DatasetRecord>& records, MetricKind mode,
                      const WorldSpec* world, std::optional<std::uint32_t> vocab);

// Builds the scorer-facing sample for one likelihood-mode record.  The
// record's own entropy field wins; otherwise the world supplies the exact
// sequence entropy for (creator, prompt), and prompt tokens are resolved to
// the world's prompt ids (ambiguity across prompts with different laws is an
// error).
WeightedSample weighted_sample_from_record(const DatasetRecord& rec, MetricKind mode,
                                           const WorldSpec* world);

MetricKind metric_kind_from_name(const std::string& name);
CertificateKind certificate_kind_from_name(const std::string& name);
ScorerFamilySpec scorer_family_from_json(const nlohmann::json& doc);

struct SimulateConfig {
    TrialConfig trial;
    std::string world_path;  // resolved; empty when the world was inline
    OrderedJson raw;         // the config document, echoed into reports
};

// Simulate configs reference their world by inline object or by a path
// resolved relative to the config file's own directory.
SimulateConfig load_simulate_config(const std::string& path);

// Non-finite reals are encoded as the strings "infinity" / "-infinity" /
// "nan" so report documents stay valid JSON.
OrderedJson real_to_json(double value);
double real_from_json(const nlohmann::json& value, const char* what);

OrderedJson metric_to_json(const MetricValue& metric);
MetricValue metric_from_json(const nlohmann::json& doc);
OrderedJson certificate_to_json(const CertificateResult& result);
OrderedJson coverage_to_json(const CoverageReport& report);

std::uint64_t fnv1a64(const std::string& text);
std::string fnv1a64_hex(const std::string& text);

}  // namespace creativity
