#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "creativity/distribution.hpp"
#include "creativity/rng.hpp"

namespace creativity {

using Token = std::int32_t;

struct Creator {
    std::uint32_t id = 0;
};

struct Info {
    std::vector<Token> tokens;
    bool operator==(const Info&) const = default;
};

struct Prompt {
    std::uint32_t id = 0;
    std::vector<Token> tokens;
    bool operator==(const Prompt&) const = default;
};

struct Creation {
    std::vector<Token> tokens;
    bool operator==(const Creation&) const = default;
};

// Next-token rows for one (creator, prompt) pair, keyed by windowed prefix.
// Rows are stored for every prefix of length 0..window in canonical order:
// the empty prefix first, then length-1 prefixes lexicographically, and so
// on.  Position t conditions on the last min(window, t) tokens, so early
// positions (t < window) get their own rows and later ones share the
// stationary order-window rows.
struct ConditionalTable {
    std::vector<FiniteDistribution> rows;
};

// A synthetic creator universe with exactly known ground truth: creator
// weights (the population law over creators), prompt weights, per-creator
// information token lists, and the full conditional creation law.  Immutable
// once validated; share freely across threads.
struct WorldSpec {
    std::uint32_t num_creators = 0;
    std::uint32_t num_prompts = 0;
    std::uint32_t vocab_size = 0;
    std::uint32_t seq_len = 0;
    std::uint32_t window = 0;
    std::uint64_t enumeration_cap = 1u << 20;

    std::vector<double> creator_weights;        // size num_creators
    std::vector<double> prompt_weights;         // size num_prompts
    std::vector<std::vector<Token>> info_map;   // size num_creators, tokens >= vocab_size
    std::vector<std::vector<Token>> prompt_tokens;  // size num_prompts
    std::vector<ConditionalTable> law;          // size num_creators * num_prompts

    const ConditionalTable& table(std::uint32_t creator, std::uint32_t prompt) const;

    // Throws ValidationError / CapacityError on any structural defect.
    void validate() const;
};

// Rows per (creator, prompt) pair: sum of V^L for L in 0..window.
std::uint64_t prefix_state_count(std::uint32_t vocab_size, std::uint32_t window);

// Canonical row index of a windowed prefix (chronological order, first token
// most significant).
std::uint64_t prefix_state_index(std::uint32_t vocab_size, std::span<const Token> prefix);

FiniteDistribution creator_distribution(const WorldSpec& spec);
FiniteDistribution prompt_distribution(const WorldSpec& spec);

Creator draw_creator(const WorldSpec& spec, RandomStream& rng);
Prompt draw_prompt(const WorldSpec& spec, RandomStream& rng);
Prompt prompt_of(const WorldSpec& spec, std::uint32_t id);
Info information_of(const WorldSpec& spec, Creator c);

// Exact p(next token | windowed prefix, prompt, creator) row.
const FiniteDistribution& truth_next_token(const WorldSpec& spec, Creator c, const Prompt& u,
                                           std::span<const Token> prefix);

Creation draw_creation(const WorldSpec& spec, Creator c, const Prompt& u, RandomStream& rng);

// Sequence enumeration in lexicographic order, first token most significant.
std::uint64_t creation_count(const WorldSpec& spec);
Creation creation_at(const WorldSpec& spec, std::uint64_t index);
std::uint64_t creation_index(const WorldSpec& spec, const Creation& x);

// Exact sequence-level law p(x | u, c) over all V^T creations.
FiniteDistribution sequence_distribution(const WorldSpec& spec, Creator c, const Prompt& u);

}  // namespace creativity
