#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "uprank/errors.hpp"
#include "uprank/rank_baseline.hpp"
#include "uprank/worlds.hpp"

using namespace uprank;

TEST_CASE("dp_step recurrence") {
    CHECK(dp_step({1, 0}, 0.3) == RVector{0.7, 0.3});
    RVector r = dp_step({0.7, 0.3}, 0.5);
    CHECK(r[0] == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(0.50).epsilon(1e-12));
    CHECK(dp_step({1, 0, 0}, 1.0) == RVector{0, 1, 0});
    CHECK_THROWS_AS(dp_step({1, 0}, 0.0), ValidationError);
    CHECK_THROWS_AS(dp_step({1, 0}, 1.5), ValidationError);
}

TEST_CASE("exclusion set keeps insertion order and accumulates") {
    ExclusionSet s;
    CHECK(s.probability("x") == 0.0);
    CHECK(!s.contains("x"));
    s.set("b", 0.5);
    s.set("a", 0.3);
    s.set("b", 0.7);  // overwrite keeps position
    REQUIRE(s.size() == 2);
    CHECK(s.entries()[0].first == "b");
    CHECK(s.entries()[0].second == 0.7);
    CHECK(s.entries()[1].first == "a");
    CHECK(s.probability("a") == 0.3);
}

TEST_CASE("recompute_r on the eight-tuple example") {
    SUBCASE("empty set gives the base vector") {
        CHECK(recompute_r(ExclusionSet{}, "any", 2) == RVector{1, 0});
    }
    ExclusionSet s;
    s.set("x1", 0.3);
    s.set("x2", 0.5);
    SUBCASE("excluded id absent") {
        RVector r = recompute_r(s, "none", 2);
        CHECK(r[0] == doctest::Approx(0.35).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(0.50).epsilon(1e-12));
    }
    SUBCASE("excluding the current x-tuple") {
        s.set("x3", 0.5);
        RVector r = recompute_r(s, "x1", 2);
        CHECK(r[0] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(0.50).epsilon(1e-12));
    }
}

TEST_CASE("baseline position probabilities on the eight-tuple example") {
    RankMatrix m = baseline_pij(testutil::table1(), 2);
    CHECK(m.at(0, 1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(m.at(0, 2) == 0.0);
    CHECK(m.at(1, 1) == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(m.at(1, 2) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(m.at(2, 1) == doctest::Approx(0.175).epsilon(1e-12));
    CHECK(m.at(2, 2) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(m.at(3, 1) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(m.at(3, 2) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("baseline matches the worlds oracle on the four-tuple example") {
    XRelation rel = testutil::fig1a();
    RankMatrix b = baseline_pij(rel, 2);
    RankMatrix o = oracle_pij(rel, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 1; j <= 2; ++j) {
            CHECK(b.at(i, j) == doctest::Approx(o.at(i, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("singleton relations never trigger a recompute") {
    RankStats stats;
    baseline_pij(testutil::fig1a_singletons(), 3, &stats);
    CHECK(stats.recompute_calls == 0);
}

TEST_CASE("k out of range") {
    CHECK_THROWS_AS(baseline_pij(testutil::fig1a(), 0), std::out_of_range);
    CHECK_THROWS_AS(baseline_pij(testutil::fig1a(), 5), std::out_of_range);
}

TEST_CASE("baseline equals the oracle on random small relations") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + int(rng() % 11);
        XRelation rel = testutil::random_relation(rng, n);
        const std::size_t k = 1 + rng() % rel.size();
        RankMatrix b = baseline_pij(rel, k);
        RankMatrix o = oracle_pij(rel, k);
        for (std::size_t i = 0; i < rel.size(); ++i) {
            for (std::size_t j = 1; j <= k; ++j) {
                REQUIRE(b.at(i, j) == doctest::Approx(o.at(i, j)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("r prefix mass is non-increasing along the scan") {
    // Reproduce the incremental fold and watch the truncated sum shrink.
    std::mt19937_64 rng(31);
    XRelation rel = testutil::random_relation(rng, 40);
    const std::size_t k = 5;
    ExclusionSet s;
    RVector r(k, 0.0);
    r[0] = 1.0;
    double prev_mass = 1.0;
    for (const TupleRecord& t : rel.by_score()) {
        const double prior = s.probability(t.xtuple_id);
        if (prior > 0.0) {
            r = dp_step(recompute_r(s, t.xtuple_id, k), prior + t.prob);
        } else {
            r = dp_step(r, t.prob);
        }
        s.set(t.xtuple_id, prior + t.prob);
        double mass = 0.0;
        for (double v : r) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-9);
            mass += v;
        }
        CHECK(mass <= prev_mass + 1e-12);
        prev_mass = mass;
    }
}
