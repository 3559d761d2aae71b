#include <doctest.h>

#include <cmath>
#include <random>

#include "ctsum/error.hpp"
#include "ctsum/scoring.hpp"
#include "support/fixtures.hpp"

using namespace ctsum;

namespace {

// Unit 2-vector at the given cosine to (1, 0).
Vector at_cosine(double c) { return {c, std::sqrt(1.0 - c * c)}; }

}  // namespace

TEST_CASE("hyperparameter defaults and validation") {
    Hyperparams hp;
    CHECK(hp.k_first == 3);
    CHECK(hp.delta == 0.9);
    CHECK(hp.alpha == 0.8);
    CHECK(hp.beta == 0.1);
    CHECK(hp.gamma == 0.1);
    CHECK_NOTHROW(hp.validate());
    auto cs = hp.cs_only();
    CHECK(cs.alpha == 1.0);
    CHECK(cs.beta == 0.0);
    CHECK(cs.gamma == 0.0);
    CHECK(cs.delta == 0.9);

    hp.alpha = 0.5;
    CHECK_THROWS_AS(hp.validate(), InputError);
    hp = Hyperparams{};
    hp.delta = 1.5;
    CHECK_THROWS_AS(hp.validate(), InputError);
    hp = Hyperparams{};
    hp.k_first = 1;
    CHECK_THROWS_AS(hp.validate(), InputError);
}

TEST_CASE("node centroids") {
    std::vector<Vector> docs{{1, 0}, {0, 1}, {1, 1}};
    auto all = node_centroids(docs, std::vector<int>{0, 1, 2});
    CHECK_FALSE(all.outside.has_value());

    auto part = node_centroids(docs, std::vector<int>{0, 1});
    CHECK(part.inside == Vector{0.5, 0.5});
    REQUIRE(part.outside.has_value());
    CHECK(*part.outside == Vector{1, 1});

    auto single = node_centroids(docs, std::vector<int>{2});
    CHECK(single.inside == Vector{1, 1});
}

TEST_CASE("commonality-specificity score") {
    Vector s{1, 0};
    NodeCentroids parallel{{2, 0}, Vector{0, 1}};
    CHECK(score_cs(s, parallel, 1.0) == doctest::Approx(1.0));

    NodeCentroids c{at_cosine(0.8), at_cosine(0.3)};
    CHECK(score_cs(s, c, 0.9) == doctest::Approx(0.9 * 0.8 + 0.1 * 0.7).epsilon(1e-12));
    CHECK(score_cs(s, c, 0.9) == doctest::Approx(0.79));

    NodeCentroids root{at_cosine(0.5), std::nullopt};
    CHECK(score_cs(s, root, 0.9) == doctest::Approx(0.55));

    // negative cosines are floored at zero
    NodeCentroids opposite{{-1, 0}, Vector{-1, 0}};
    CHECK(score_cs(s, opposite, 0.5) == doctest::Approx(0.5));

    CHECK_THROWS_AS(score_cs(Vector{1, 0, 0}, c, 0.9), DimensionError);
}

TEST_CASE("non-redundancy score") {
    Vector s{1, 0};
    CHECK(score_nr(s, {}) == 1.0);
    std::vector<Vector> same{{3, 0}};
    CHECK(score_nr(s, same) == doctest::Approx(0.0));
    std::vector<Vector> two{at_cosine(0.2), at_cosine(0.6)};
    CHECK(score_nr(s, two) == doctest::Approx(0.4));
}

TEST_CASE("position score") {
    CHECK(score_position(1, 8) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(score_position(1, 8) == doctest::Approx(0.6065).epsilon(1e-4));
    CHECK(score_position(1, 1) == 0.5);
    CHECK(score_position(100, 27) == 0.5);
    for (int n = 1; n <= 60; ++n) {
        double prev = 2.0;
        for (int p = 1; p <= n; ++p) {
            double v = score_position(p, n);
            CHECK(v >= 0.5);
            CHECK(v < 1.0);
            CHECK(v <= prev);
            CHECK(v <= score_position(1, n));
            prev = v;
        }
    }
}

TEST_CASE("final score") {
    Hyperparams cs_only{.delta = 0.9, .alpha = 1, .beta = 0, .gamma = 0};
    CHECK(score_final(0.7, 0.2, 0.9, cs_only) == doctest::Approx(0.7));
    Hyperparams hp;
    CHECK(score_final(0.79, 1.0, 0.6065, hp) == doctest::Approx(0.79265).epsilon(1e-5));
    CHECK(score_final(1, 1, 1, hp) == doctest::Approx(1.0));
}

TEST_CASE("score_nr does not increase as the selected set grows") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        auto pts = testing::random_points(rng, 10, 5);
        std::vector<Vector> selected;
        double prev = score_nr(pts[0], selected);
        for (std::size_t i = 1; i < pts.size(); ++i) {
            selected.push_back(pts[i]);
            double v = score_nr(pts[0], selected);
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("root ranking by score_cs does not depend on delta") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        auto sents = testing::random_points(rng, 12, 4, 0.0, 1.0);
        NodeCentroids root{testing::random_points(rng, 1, 4, 0.0, 1.0)[0], std::nullopt};
        auto argmax = [&](double delta) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < sents.size(); ++i) {
                if (score_cs(sents[i], root, delta) > score_cs(sents[best], root, delta)) best = i;
            }
            return best;
        };
        CHECK(argmax(0.3) == argmax(0.9));
        CHECK(argmax(0.05) == argmax(1.0));
    }
}
