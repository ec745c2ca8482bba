#include "creativity/world.hpp"

#include <cmath>
#include <string>

#include "creativity/errors.hpp"

namespace creativity {

std::uint64_t prefix_state_count(std::uint32_t vocab_size, std::uint32_t window) {
    std::uint64_t total = 0, pow = 1;
    for (std::uint32_t len = 0; len <= window; ++len) {
        total += pow;
        if (len < window) pow *= vocab_size;
    }
    return total;
}

std::uint64_t prefix_state_index(std::uint32_t vocab_size, std::span<const Token> prefix) {
    // Offset past all shorter prefixes, then base-V encode this one.
    std::uint64_t offset = 0, pow = 1;
    for (std::size_t len = 0; len < prefix.size(); ++len) {
        offset += pow;
        pow *= vocab_size;
    }
    std::uint64_t code = 0;
    for (Token tok : prefix) code = code * vocab_size + static_cast<std::uint64_t>(tok);
    return offset + code;
}

const ConditionalTable& WorldSpec::table(std::uint32_t creator, std::uint32_t prompt) const {
    return law[static_cast<std::size_t>(creator) * num_prompts + prompt];
}

void WorldSpec::validate() const {
    if (num_creators == 0 || num_prompts == 0 || vocab_size == 0 || seq_len == 0)
        throw ValidationError("world: creator, prompt, vocab and sequence counts must be positive");
    if (creator_weights.size() != num_creators)
        throw ValidationError("world: creator_weights size mismatch");
    if (prompt_weights.size() != num_prompts)
        throw ValidationError("world: prompt_weights size mismatch");
    (void)FiniteDistribution{creator_weights};  // validates simplex membership
    (void)FiniteDistribution{prompt_weights};
    if (info_map.size() != num_creators) throw ValidationError("world: info_map size mismatch");
    for (std::size_t c = 0; c < info_map.size(); ++c)
        for (Token tok : info_map[c])
            if (tok < static_cast<Token>(vocab_size))
                throw ValidationError("world: info token " + std::to_string(tok) + " of creator " +
                                      std::to_string(c) + " collides with the creation alphabet");
    if (prompt_tokens.size() != num_prompts)
        throw ValidationError("world: prompt_tokens size mismatch");

    // Keep both the sequence space and the row tables enumerable.
    std::uint64_t seq_states = 1;
    for (std::uint32_t t = 0; t < seq_len; ++t) {
        seq_states *= vocab_size;
        if (seq_states > enumeration_cap)
            throw CapacityError("world: V^T exceeds the enumeration cap");
    }
    std::uint64_t rows_needed = prefix_state_count(vocab_size, window);
    if (rows_needed > enumeration_cap)
        throw CapacityError("world: prefix state count exceeds the enumeration cap");

    if (law.size() != static_cast<std::size_t>(num_creators) * num_prompts)
        throw ValidationError("world: conditional law must cover every (creator, prompt) pair");
    for (const ConditionalTable& tab : law) {
        if (tab.rows.size() != rows_needed)
            throw ValidationError("world: conditional table has " +
                                  std::to_string(tab.rows.size()) + " rows, expected " +
                                  std::to_string(rows_needed));
        for (const FiniteDistribution& row : tab.rows)
            if (row.size() != vocab_size)
                throw ValidationError("world: conditional row width != vocab size");
    }
}

FiniteDistribution creator_distribution(const WorldSpec& spec) {
    return FiniteDistribution(spec.creator_weights);
}

FiniteDistribution prompt_distribution(const WorldSpec& spec) {
    return FiniteDistribution(spec.prompt_weights);
}

Creator draw_creator(const WorldSpec& spec, RandomStream& rng) {
    return Creator{static_cast<std::uint32_t>(sample(creator_distribution(spec), rng))};
}

Prompt draw_prompt(const WorldSpec& spec, RandomStream& rng) {
    return prompt_of(spec, static_cast<std::uint32_t>(sample(prompt_distribution(spec), rng)));
}

Prompt prompt_of(const WorldSpec& spec, std::uint32_t id) {
    if (id >= spec.num_prompts)
        throw LookupError("prompt id " + std::to_string(id) + " out of range");
    return Prompt{id, spec.prompt_tokens[id]};
}

Info information_of(const WorldSpec& spec, Creator c) {
    if (c.id >= spec.num_creators)
        throw LookupError("creator id " + std::to_string(c.id) + " out of range");
    return Info{spec.info_map[c.id]};
}

const FiniteDistribution& truth_next_token(const WorldSpec& spec, Creator c, const Prompt& u,
                                           std::span<const Token> prefix) {
    if (c.id >= spec.num_creators) throw LookupError("creator id out of range");
    if (u.id >= spec.num_prompts) throw LookupError("prompt id out of range");
    if (prefix.size() > spec.window)
        throw DomainError("truth_next_token: prefix longer than the window");
    for (Token tok : prefix)
        if (tok < 0 || tok >= static_cast<Token>(spec.vocab_size))
            throw DomainError("truth_next_token: prefix token outside the alphabet");
    return spec.table(c.id, u.id).rows[prefix_state_index(spec.vocab_size, prefix)];
}

Creation draw_creation(const WorldSpec& spec, Creator c, const Prompt& u, RandomStream& rng) {
    Creation x;
    x.tokens.reserve(spec.seq_len);
    for (std::uint32_t t = 0; t < spec.seq_len; ++t) {
        std::size_t win = std::min<std::size_t>(spec.window, x.tokens.size());
        std::span<const Token> prefix(x.tokens.data() + x.tokens.size() - win, win);
        x.tokens.push_back(
            static_cast<Token>(sample(truth_next_token(spec, c, u, prefix), rng)));
    }
    return x;
}

std::uint64_t creation_count(const WorldSpec& spec) {
    std::uint64_t count = 1;
    for (std::uint32_t t = 0; t < spec.seq_len; ++t) {
        count *= spec.vocab_size;
        if (count > spec.enumeration_cap)
            throw CapacityError("creation enumeration exceeds the cap");
    }
    return count;
}

Creation creation_at(const WorldSpec& spec, std::uint64_t index) {
    if (index >= creation_count(spec))
        throw LookupError("creation index " + std::to_string(index) + " out of range");
    Creation x;
    x.tokens.assign(spec.seq_len, 0);
    for (std::uint32_t t = spec.seq_len; t-- > 0;) {
        x.tokens[t] = static_cast<Token>(index % spec.vocab_size);
        index /= spec.vocab_size;
    }
    return x;
}

std::uint64_t creation_index(const WorldSpec& spec, const Creation& x) {
    std::uint64_t index = 0;
    for (Token tok : x.tokens) index = index * spec.vocab_size + static_cast<std::uint64_t>(tok);
    return index;
}

FiniteDistribution sequence_distribution(const WorldSpec& spec, Creator c, const Prompt& u) {
    std::uint64_t count = creation_count(spec);
    std::vector<double> probs(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Creation x = creation_at(spec, i);
        double p = 1.0;
        for (std::uint32_t t = 0; t < spec.seq_len && p > 0.0; ++t) {
            std::size_t win = std::min<std::size_t>(spec.window, t);
            std::span<const Token> prefix(x.tokens.data() + t - win, win);
            p *= truth_next_token(spec, c, u, prefix).prob(static_cast<std::size_t>(x.tokens[t]));
        }
        probs[i] = p;
    }
    return FiniteDistribution(std::move(probs));
}

}  // namespace creativity
