#include <vector>

#include "doctest.h"

#include "creativity/errors.hpp"
#include "creativity/world.hpp"
#include "support.hpp"

using creativity::Creation;
using creativity::Creator;
using creativity::FiniteDistribution;
using creativity::Prompt;
using creativity::Token;
using creativity::WorldSpec;

TEST_CASE("prefix state counting") {
    CHECK(creativity::prefix_state_count(2, 0) == 1);
    CHECK(creativity::prefix_state_count(2, 1) == 3);
    CHECK(creativity::prefix_state_count(3, 2) == 13);  // 1 + 3 + 9
    CHECK(creativity::prefix_state_count(5, 0) == 1);
}

TEST_CASE("prefix state indexing: shorter prefixes first, then lexicographic") {
    const std::vector<Token> empty;
    CHECK(creativity::prefix_state_index(2, empty) == 0);
    const std::vector<Token> zero = {0}, one = {1};
    CHECK(creativity::prefix_state_index(2, zero) == 1);
    CHECK(creativity::prefix_state_index(2, one) == 2);
    // V = 3, prefix [2,1]: offset 1 + 3, code 2*3 + 1.
    const std::vector<Token> two_one = {2, 1};
    CHECK(creativity::prefix_state_index(3, two_one) == 11);
}

TEST_CASE("validation rejects structural defects") {
    WorldSpec good = testsupport::deterministic_world(4);

    WorldSpec w = good;
    w.creator_weights.pop_back();
    CHECK_THROWS_AS(w.validate(), creativity::ValidationError);

    w = good;
    w.creator_weights = {0.5, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(w.validate(), creativity::ValidationError);

    w = good;
    w.info_map[2] = {1};  // collides with the creation alphabet
    CHECK_THROWS_AS(w.validate(), creativity::ValidationError);

    w = good;
    w.law.pop_back();
    CHECK_THROWS_AS(w.validate(), creativity::ValidationError);

    w = good;
    w.law[0].rows.pop_back();
    CHECK_THROWS_AS(w.validate(), creativity::ValidationError);

    w = good;
    w.law[1].rows[0] = FiniteDistribution::uniform(3);
    CHECK_THROWS_AS(w.validate(), creativity::ValidationError);

    w = good;
    w.enumeration_cap = 2;  // V^T = 4 exceeds it
    CHECK_THROWS_AS(w.validate(), creativity::CapacityError);
}

TEST_CASE("truth rows are looked up by windowed prefix") {
    const WorldSpec w = testsupport::deterministic_world(4);
    // Creator 3 emits (1, 1).
    const Prompt u = creativity::prompt_of(w, 0);
    const std::vector<Token> empty;
    CHECK(creativity::truth_next_token(w, Creator{3}, u, empty).prob(1) == 1.0);
    const std::vector<Token> after_one = {1};
    CHECK(creativity::truth_next_token(w, Creator{3}, u, after_one).prob(1) == 1.0);

    const std::vector<Token> too_long = {0, 1};
    CHECK_THROWS_AS(creativity::truth_next_token(w, Creator{3}, u, too_long),
                    creativity::DomainError);
    const std::vector<Token> alien = {7};
    CHECK_THROWS_AS(creativity::truth_next_token(w, Creator{3}, u, alien),
                    creativity::DomainError);
    CHECK_THROWS_AS(creativity::truth_next_token(w, Creator{9}, u, empty),
                    creativity::LookupError);
}

TEST_CASE("creation enumeration round-trips in lexicographic order") {
    const WorldSpec w = testsupport::mixed_world();
    const std::uint64_t count = creativity::creation_count(w);
    CHECK(count == 9);  // 3^2
    CHECK(creativity::creation_at(w, 0).tokens == std::vector<Token>{0, 0});
    CHECK(creativity::creation_at(w, 1).tokens == std::vector<Token>{0, 1});
    CHECK(creativity::creation_at(w, 3).tokens == std::vector<Token>{1, 0});
    for (std::uint64_t i = 0; i < count; ++i)
        CHECK(creativity::creation_index(w, creativity::creation_at(w, i)) == i);
    CHECK_THROWS_AS(creativity::creation_at(w, count), creativity::LookupError);
}

TEST_CASE("sequence distribution of a deterministic creator is a point mass") {
    const WorldSpec w = testsupport::deterministic_world(4);
    const Prompt u = creativity::prompt_of(w, 0);
    // Creator 2 emits (0, 1), creation index 0*2+1.
    const FiniteDistribution d = creativity::sequence_distribution(w, Creator{2}, u);
    CHECK(d.size() == 4);
    CHECK(d.prob(1) == 1.0);
}

TEST_CASE("sequence distribution multiplies conditional rows") {
    const WorldSpec w = testsupport::mixed_world();
    const Prompt u = creativity::prompt_of(w, 1);
    const FiniteDistribution d = creativity::sequence_distribution(w, Creator{0}, u);
    double total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) total += d.prob(i);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // p(x0=0) * p(x1=2 | x0=0): rows from the builder's weight pattern.
    const std::vector<Token> empty, zero = {0};
    const double expect = creativity::truth_next_token(w, Creator{0}, u, empty).prob(0) *
                          creativity::truth_next_token(w, Creator{0}, u, zero).prob(2);
    const Creation x{{0, 2}};
    CHECK(d.prob(creativity::creation_index(w, x)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("draws are deterministic and stay inside the law's support") {
    const WorldSpec w = testsupport::deterministic_world(8);
    creativity::RandomStream a(5), b(5);
    for (int i = 0; i < 20; ++i) {
        const Creator ca = creativity::draw_creator(w, a);
        const Creator cb = creativity::draw_creator(w, b);
        CHECK(ca.id == cb.id);
        const Prompt u = creativity::prompt_of(w, 0);
        const Creation xa = creativity::draw_creation(w, ca, u, a);
        const Creation xb = creativity::draw_creation(w, cb, u, b);
        CHECK(xa == xb);
        // Deterministic world: the draw must be the creator's fixed sequence.
        CHECK(xa.tokens == std::vector<Token>{static_cast<Token>(ca.id % 2),
                                              static_cast<Token>((ca.id / 2) % 2)});
    }
}

TEST_CASE("creator and prompt lookups validate ids") {
    const WorldSpec w = testsupport::two_prompt_world();
    CHECK(creativity::prompt_of(w, 1).tokens == std::vector<Token>{101});
    CHECK(creativity::information_of(w, Creator{3}).tokens == std::vector<Token>{13});
    CHECK_THROWS_AS(creativity::prompt_of(w, 2), creativity::LookupError);
    CHECK_THROWS_AS(creativity::information_of(w, Creator{8}), creativity::LookupError);
}
