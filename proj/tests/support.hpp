#pragma once

// Small worlds shared across test suites.  Every builder returns a validated
// spec; tests that need a broken spec mutate a copy before calling validate().

#include <memory>
#include <vector>

#include "creativity/world.hpp"

namespace testsupport {

using creativity::ConditionalTable;
using creativity::FiniteDistribution;
using creativity::Token;
using creativity::WorldSpec;

inline FiniteDistribution pm(std::size_t index, std::size_t size = 2) {
    return FiniteDistribution::point_mass(index, size);
}

// K deterministic creators over {0,1}^2 with window 1: creator c emits
// (c mod 2, (c/2) mod 2).  Single empty prompt, uniform creator weights.
inline WorldSpec deterministic_world(std::uint32_t num_creators) {
    WorldSpec w;
    w.num_creators = num_creators;
    w.num_prompts = 1;
    w.vocab_size = 2;
    w.seq_len = 2;
    w.window = 1;
    w.creator_weights.assign(num_creators, 1.0 / num_creators);
    w.prompt_weights = {1.0};
    w.prompt_tokens = {{}};
    for (std::uint32_t c = 0; c < num_creators; ++c) {
        w.info_map.push_back({static_cast<Token>(2 + c)});
        const std::size_t b0 = c % 2, b1 = (c / 2) % 2;
        w.law.push_back(ConditionalTable{{pm(b0), pm(b1), pm(b1)}});
    }
    w.validate();
    return w;
}

// Two creators, one token each: creator c emits token c.  T = 1, window 0.
inline WorldSpec identity_world() {
    WorldSpec w;
    w.num_creators = 2;
    w.num_prompts = 1;
    w.vocab_size = 2;
    w.seq_len = 1;
    w.window = 0;
    w.creator_weights = {0.5, 0.5};
    w.prompt_weights = {1.0};
    w.prompt_tokens = {{}};
    w.info_map = {{5}, {6}};
    w.law = {ConditionalTable{{pm(0)}}, ConditionalTable{{pm(1)}}};
    w.validate();
    return w;
}

// Two prompts, eight deterministic creators; prompt u shifts both emitted
// bits.  Mirrors configs/world_cor3.json.
inline WorldSpec two_prompt_world() {
    WorldSpec w;
    w.num_creators = 8;
    w.num_prompts = 2;
    w.vocab_size = 2;
    w.seq_len = 2;
    w.window = 1;
    w.creator_weights.assign(8, 0.125);
    w.prompt_weights = {0.6, 0.4};
    w.prompt_tokens = {{100}, {101}};
    for (std::uint32_t c = 0; c < 8; ++c) {
        w.info_map.push_back({static_cast<Token>(10 + c)});
        for (std::uint32_t u = 0; u < 2; ++u) {
            const std::size_t b0 = (c + u) % 2, b1 = ((c >> 1) + u) % 2;
            w.law.push_back(ConditionalTable{{pm(b0), pm(b1), pm(b1)}});
        }
    }
    w.validate();
    return w;
}

// Every next-token row strictly positive, two prompts, three creators over a
// three-token alphabet.  Mirrors configs/world_mix.json.
inline WorldSpec mixed_world() {
    WorldSpec w;
    w.num_creators = 3;
    w.num_prompts = 2;
    w.vocab_size = 3;
    w.seq_len = 2;
    w.window = 1;
    w.creator_weights = {0.5, 0.3, 0.2};
    w.prompt_weights = {0.7, 0.3};
    w.prompt_tokens = {{7}, {8}};
    w.info_map = {{20}, {21}, {22}};
    for (std::uint32_t c = 0; c < 3; ++c)
        for (std::uint32_t u = 0; u < 2; ++u) {
            ConditionalTable tab;
            for (std::uint32_t r = 0; r < 4; ++r) {
                std::vector<double> weights = {1.0 + (c + r) % 3, 1.0 + (u + r + 1) % 3,
                                               1.0 + (c + u + r + 2) % 3};
                const double z = weights[0] + weights[1] + weights[2];
                for (double& x : weights) x /= z;
                tab.rows.emplace_back(weights);
            }
            w.law.push_back(std::move(tab));
        }
    w.validate();
    return w;
}

inline std::shared_ptr<const WorldSpec> shared(WorldSpec w) {
    return std::make_shared<const WorldSpec>(std::move(w));
}

}  // namespace testsupport
