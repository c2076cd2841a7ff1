#include <catch2/catch_amalgamated.hpp>

#include "interbound/distributions.hpp"
#include "interbound/rng.hpp"

using namespace interbound;

TEST_CASE("valid containers construct") {
    CHECK_NOTHROW(ObservedJoint::from_rows({{0.5, 0.0}, {0.0, 0.5}}));
    CHECK_NOTHROW(SimplexVector({0.3, 0.7}));
    CHECK_NOTHROW(LatentJoint::from_rows({{0.25, 0.25}, {0.25, 0.25}}));
    CHECK_NOTHROW(ConditionalMatrix::from_rows({{0.5, 0.5}, {0.0, 1.0}}));
}

TEST_CASE("mass mismatch is rejected, never renormalized") {
    CHECK_THROWS_AS(ObservedJoint::from_rows({{0.5, 0.1}, {0.0, 0.5}}),
                    MassMismatch);
    CHECK_THROWS_AS(SimplexVector({0.5, 0.6}), MassMismatch);
    CHECK_THROWS_AS(ConditionalMatrix::from_rows({{0.5, 0.4}, {0.5, 0.5}}),
                    MassMismatch);
}

TEST_CASE("negative mass is rejected") {
    CHECK_THROWS_AS(SimplexVector({1.1, -0.1}), NegativeMass);
    CHECK_THROWS_AS(ObservedJoint::from_rows({{1.5, -0.5}, {0.0, 0.0}}),
                    NegativeMass);
    // Within tolerance is accepted as-is.
    CHECK_NOTHROW(SimplexVector({1.0 + 5e-10, -5e-10}));
}

TEST_CASE("shape errors") {
    CHECK_THROWS_AS(ObservedJoint::from_rows({{0.5, 0.5}, {0.0}}), ShapeError);
    CHECK_THROWS_AS(ObservedJoint(2, {0.5, 0.5}), ShapeError);
    CHECK_THROWS_AS(l1_distance(SimplexVector({0.5, 0.5}),
                                SimplexVector({0.2, 0.3, 0.5})),
                    ShapeError);
}

TEST_CASE("kernel validation checks every (x,u) slice") {
    // nu[z][x][u]: z-slices of x-rows over u.
    CHECK_NOTHROW(ResponseKernel::from_nested(
        {{{1.0, 0.0}, {0.0, 0.5}}, {{0.0, 1.0}, {1.0, 0.5}}}));
    CHECK_THROWS_AS(ResponseKernel::from_nested(
                        {{{1.0, 0.0}, {0.0, 0.5}}, {{0.0, 1.0}, {1.0, 0.6}}}),
                    MassMismatch);
}

TEST_CASE("l1 distance examples") {
    CHECK(l1_distance(SimplexVector({1.0, 0.0}), SimplexVector({0.0, 1.0})) ==
          2.0);
    SimplexVector p({0.4, 0.6});
    CHECK(l1_distance(p, p) == 0.0);
    CHECK(l1_distance(SimplexVector({0.5, 0.5}),
                      SimplexVector({0.75, 0.25})) == Catch::Approx(0.5));
}

TEST_CASE("product distribution examples") {
    const LatentJoint uniform =
        product_distribution(SimplexVector({0.5, 0.5}), SimplexVector({0.5, 0.5}));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t u = 0; u < 2; ++u)
            CHECK(uniform.at(x, u) == Catch::Approx(0.25));

    const LatentJoint point =
        product_distribution(SimplexVector({1.0, 0.0}), SimplexVector({0.3, 0.7}));
    CHECK(point.at(0, 0) == Catch::Approx(0.3));
    CHECK(point.at(0, 1) == Catch::Approx(0.7));
    CHECK(point.at(1, 0) == 0.0);
    CHECK(point.at(1, 1) == 0.0);

    const LatentJoint generic =
        product_distribution(SimplexVector({0.3, 0.7}), SimplexVector({0.2, 0.8}));
    CHECK(generic.at(0, 0) == Catch::Approx(0.06));
    CHECK(generic.at(0, 1) == Catch::Approx(0.24));
    CHECK(generic.at(1, 0) == Catch::Approx(0.14));
    CHECK(generic.at(1, 1) == Catch::Approx(0.56));
}

TEST_CASE("marginals examples") {
    const auto [mx, mu_u] =
        marginals(LatentJoint::from_rows({{0.5, 0.0}, {0.0, 0.5}}));
    CHECK(mx[0] == Catch::Approx(0.5));
    CHECK(mu_u[1] == Catch::Approx(0.5));

    const auto [ux, uu] =
        marginals(LatentJoint::from_rows({{0.25, 0.25}, {0.25, 0.25}}));
    CHECK(ux[0] == Catch::Approx(0.5));
    CHECK(uu[0] == Catch::Approx(0.5));
}

TEST_CASE("marginals of a product recover the factors") {
    SubstreamRng rng(11, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 3, k = 1 + trial % 4;
        SimplexVector p(rng.dirichlet(n, 1.0));
        SimplexVector q(rng.dirichlet(k, 1.0));
        const auto [mx, mu_u] = marginals(product_distribution(p, q));
        for (std::size_t i = 0; i < n; ++i)
            REQUIRE(std::abs(mx[i] - p[i]) <= 1e-12);
        for (std::size_t j = 0; j < k; ++j)
            REQUIRE(std::abs(mu_u[j] - q[j]) <= 1e-12);
    }
}

TEST_CASE("l1 distance is a symmetric nonnegative pseudometric") {
    SubstreamRng rng(12, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 4;
        SimplexVector a(rng.dirichlet(n, 1.0));
        SimplexVector b(rng.dirichlet(n, 1.0));
        const double ab = l1_distance(a, b);
        REQUIRE(ab >= 0.0);
        REQUIRE(ab == l1_distance(b, a));
        double max_diff = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            max_diff = std::max(max_diff, std::abs(a[i] - b[i]));
        REQUIRE(ab >= max_diff);
        REQUIRE(ab <= static_cast<double>(n) * max_diff + 1e-15);
        // Zero exactly when no entry differs beyond tolerance-scale noise.
        if (ab == 0.0) REQUIRE(max_diff <= kSimplexTol);
        if (max_diff > kSimplexTol) REQUIRE(ab > 0.0);
    }
}

TEST_CASE("validate is idempotent and never mutates") {
    const ObservedJoint pi = ObservedJoint::from_rows({{0.4, 0.1}, {0.2, 0.3}});
    const ObservedJoint once = validate(pi);
    const ObservedJoint twice = validate(once);
    CHECK(once == pi);
    CHECK(twice == pi);
}

TEST_CASE("observed joint flags zero rows") {
    const ObservedJoint pi = ObservedJoint::from_rows({{0.5, 0.5}, {0.0, 0.0}});
    CHECK(pi.zero_rows() == std::vector<std::size_t>{1});
    CHECK(ObservedJoint::from_rows({{0.5, 0.0}, {0.0, 0.5}}).zero_rows().empty());
}
