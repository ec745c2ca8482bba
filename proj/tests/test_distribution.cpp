#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"

#include "creativity/distribution.hpp"
#include "creativity/errors.hpp"
#include "creativity/rng.hpp"

using creativity::FiniteDistribution;
using creativity::RandomStream;

// Expected constants frozen from tests/oracle/frozen_values.py.

TEST_CASE("construction validates the simplex") {
    CHECK_THROWS_AS(FiniteDistribution(std::vector<double>{}), creativity::ValidationError);
    CHECK_THROWS_AS(FiniteDistribution({0.5, -0.1, 0.6}), creativity::ValidationError);
    CHECK_THROWS_AS(FiniteDistribution({0.5, 0.4}), creativity::ValidationError);
    CHECK_THROWS_AS(FiniteDistribution({0.7, 0.7}), creativity::ValidationError);
    CHECK_THROWS_AS(FiniteDistribution({0.5, std::nan("")}), creativity::ValidationError);

    const FiniteDistribution d({0.25, 0.75});
    CHECK(d.size() == 2);
    CHECK(d.prob(0) == 0.25);
    CHECK(d.prob(1) == 0.75);
}

TEST_CASE("near-simplex input is renormalized") {
    // Off by 4e-10: inside tolerance, still must sum to 1 after construction.
    const FiniteDistribution d({0.5 + 2e-10, 0.5 + 2e-10});
    CHECK(d.prob(0) + d.prob(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("uniform and point mass factories") {
    const FiniteDistribution u = FiniteDistribution::uniform(4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(u.prob(i) == 0.25);

    const FiniteDistribution p = FiniteDistribution::point_mass(2, 4);
    CHECK(p.prob(2) == 1.0);
    CHECK(p.prob(0) == 0.0);
    CHECK_THROWS_AS(FiniteDistribution::point_mass(4, 4), creativity::ValidationError);
    CHECK_THROWS_AS(FiniteDistribution::uniform(0), creativity::ValidationError);
}

TEST_CASE("entropy matches the frozen table") {
    CHECK(creativity::entropy(FiniteDistribution::uniform(4)) ==
          doctest::Approx(1.38629436111989).epsilon(1e-9));
    CHECK(creativity::entropy(FiniteDistribution::point_mass(1, 3)) == 0.0);
    CHECK(creativity::entropy(FiniteDistribution({0.5, 0.25, 0.25})) ==
          doctest::Approx(1.03972077083992).epsilon(1e-9));
    CHECK(creativity::entropy(FiniteDistribution({0.7, 0.3})) ==
          doctest::Approx(0.610864302054893).epsilon(1e-9));
    CHECK(creativity::entropy(FiniteDistribution({0.9, 0.05, 0.03, 0.02})) ==
          doctest::Approx(0.428048274797906).epsilon(1e-9));
}

TEST_CASE("kl divergence matches the frozen table") {
    const FiniteDistribution p({0.5, 0.5});
    CHECK(creativity::kl_divergence(p, p) == 0.0);
    CHECK(creativity::kl_divergence(FiniteDistribution({1.0, 0.0}), p) ==
          doctest::Approx(0.693147180559945).epsilon(1e-9));
    CHECK(creativity::kl_divergence(p, FiniteDistribution({0.9, 0.1})) ==
          doctest::Approx(0.510825623765991).epsilon(1e-9));

    // Support violation: p positive where q is zero.
    const double inf = creativity::kl_divergence(FiniteDistribution({0.5, 0.5}),
                                                 FiniteDistribution({1.0, 0.0}));
    CHECK(std::isinf(inf));
    CHECK(inf > 0);

    CHECK_THROWS_AS(creativity::kl_divergence(p, FiniteDistribution::uniform(3)),
                    creativity::DimensionError);
}

TEST_CASE("smoothing pulls toward uniform") {
    const FiniteDistribution q({1.0, 0.0});
    const FiniteDistribution s = creativity::smooth(q, 0.5);
    CHECK(s.prob(0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(s.prob(1) == doctest::Approx(0.25).epsilon(1e-15));

    CHECK(creativity::smooth(q, 0.0) == q);
    const FiniteDistribution u = FiniteDistribution::uniform(3);
    CHECK(creativity::smooth(u, 0.7) == u);
    CHECK_THROWS_AS(creativity::smooth(q, -0.1), creativity::DomainError);
}

TEST_CASE("sampling is deterministic under a fixed seed") {
    const FiniteDistribution d({0.2, 0.5, 0.3});
    RandomStream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(creativity::sample(d, a) == creativity::sample(d, b));

    const FiniteDistribution point = FiniteDistribution::point_mass(2, 4);
    RandomStream c(7);
    for (int i = 0; i < 50; ++i) CHECK(creativity::sample(point, c) == 2);
}

TEST_CASE("sampling frequencies concentrate") {
    const FiniteDistribution d = FiniteDistribution::uniform(2);
    RandomStream rng(123);
    int zeros = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
        if (creativity::sample(d, rng) == 0) ++zeros;
    const double freq = static_cast<double>(zeros) / draws;
    CHECK(freq > 0.49);
    CHECK(freq < 0.51);
}

TEST_CASE("compensated summation") {
    CHECK(creativity::kahan_sum({}) == 0.0);
    CHECK(creativity::kahan_sum({2.5}) == 2.5);
    const std::vector<double> tenths(10, 0.1);
    CHECK(creativity::kahan_sum(tenths) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("seed derivation separates trial streams") {
    const std::uint64_t a = creativity::derive_seed(99, 0);
    const std::uint64_t b = creativity::derive_seed(99, 1);
    const std::uint64_t c = creativity::derive_seed(100, 0);
    CHECK(a != b);
    CHECK(a != c);
    CHECK(creativity::derive_seed(99, 0) == a);
}
