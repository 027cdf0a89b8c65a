#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "uprank/condprob.hpp"
#include "uprank/datagen.hpp"
#include "uprank/errors.hpp"
#include "uprank/rank_baseline.hpp"
#include "uprank/worlds.hpp"

using namespace uprank;

namespace {

void check_close(const std::vector<double>& got, const std::vector<double>& want,
                 double tol = 1e-12) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(tol).scale(1.0));
    }
}

}  // namespace

TEST_CASE("solve_c back-substitution") {
    check_close(solve_c({0.175, 0.425}, 0.3), {0.25, 0.5});
    check_close(solve_c({0.075, 0.325}, 0.0), {0.075, 0.325});
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        RVector r{0.1, 0.2, 0.3, 0.4};
        std::shuffle(r.begin(), r.end(), rng);
        check_close(solve_c(r, 0.0), r);  // rho = 0 is the identity
    }
}

TEST_CASE("solve_c refuses an ill-conditioned rho") {
    CHECK_THROWS_AS(solve_c({0.5, 0.5}, 1.0), IllConditionedError);
    CHECK_THROWS_AS(solve_c({0.5, 0.5}, 1.0 - 1e-10), IllConditionedError);
    // The boundary itself is allowed (on an r consistent with that rho).
    const double rho = 1.0 - 1e-9;
    CHECK_NOTHROW(solve_c(apply_rc({0.0, 0.7}, rho), rho));
}

TEST_CASE("solve_c clamps rounding dust only") {
    // A tiny negative produced by cancellation snaps to 0...
    CHECK(solve_c({-1e-17, 0.5}, 0.5)[0] == 0.0);
    // ...but a real violation is a logic/input error.
    CHECK_THROWS_AS(solve_c({1.0, 0.0, 0.0}, 0.9), InternalError);
}

TEST_CASE("apply_rc forward map") {
    check_close(apply_rc({1, 0}, 0.3), {0.7, 0.3});
    check_close(apply_rc({0.25, 0.5}, 0.7), {0.075, 0.325});
    check_close(apply_rc({0.4, 0.6}, 0.0), {0.4, 0.6});
}

TEST_CASE("round-trip apply_rc after solve_c") {
    // r must come from a bounded conditional distribution; amplification of
    // rounding error grows like (rho/(1-rho))^k, so deeper vectors are only
    // testable at smaller rho.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto reachable_r = [&](std::size_t k, double rho) {
        CVector c(k);
        double sum = 0.0;
        for (double& v : c) sum += (v = u(rng));
        if (sum > 1.0) {
            for (double& v : c) v /= sum;
        }
        return apply_rc(c, rho);
    };
    const struct { double rho; std::size_t k; } grid[] = {
        {0.0, 64}, {0.2, 64}, {0.5, 64}, {0.6, 10}, {0.7, 5}, {0.8, 3}, {0.9, 2}};
    for (const auto& g : grid) {
        for (int t = 0; t < 100; ++t) {
            RVector r = reachable_r(g.k, g.rho);
            check_close(apply_rc(solve_c(r, g.rho), g.rho), r);
        }
    }

    // At the boundary rho the only [0,1]-consistent c vectors have all the
    // leading entries 0; the round-trip is then exact to a few ulp.
    const double rho = 1.0 - 1e-9;
    for (double x : {0.1, 0.5, 1.0}) {
        CVector c(16, 0.0);
        c.back() = x;
        RVector r = apply_rc(c, rho);
        check_close(apply_rc(solve_c(r, rho), rho), r);
    }
}

TEST_CASE("cond_step matches the worked example") {
    SUBCASE("step 2 of the eight-tuple scan") {
        ExclusionSet s;
        s.set("x1", 0.3);
        StepOutput out = cond_step(s, {0.7, 0.3}, {"t2", "x2", 90, 0.5});
        check_close(out.p_row, {0.35, 0.15});
        check_close(out.r_next, {0.35, 0.5});
        CHECK(out.rho_after == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(s.probability("x2") == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("step 4: the x-tuple already has a scanned alternative") {
        ExclusionSet s;
        s.set("x1", 0.3);
        s.set("x2", 0.5);
        s.set("x3", 0.5);
        StepOutput out = cond_step(s, {0.175, 0.425}, {"t4", "x1", 70, 0.4});
        check_close(out.p_row, {0.1, 0.2});
        check_close(out.r_next, {0.075, 0.325});
        CHECK(s.probability("x1") == doctest::Approx(0.7).epsilon(1e-12));
    }
    SUBCASE("certain top tuple") {
        ExclusionSet s;
        StepOutput out = cond_step(s, {1, 0}, {"t", "x", 1, 1.0});
        check_close(out.p_row, {1, 0});
        check_close(out.r_next, {0, 1});
    }
}

TEST_CASE("condprob rows on the worked examples") {
    RankMatrix m = condprob_pij(testutil::table1(), 2);
    check_close({m.at(0, 1), m.at(0, 2)}, {0.3, 0.0});
    check_close({m.at(1, 1), m.at(1, 2)}, {0.35, 0.15});
    check_close({m.at(2, 1), m.at(2, 2)}, {0.175, 0.25});
    check_close({m.at(3, 1), m.at(3, 2)}, {0.1, 0.2});

    RankMatrix f = condprob_pij(testutil::fig1a(), 2);
    CHECK(f.at(1, 1) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(f.at(2, 2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("condprob equals the oracle on random small relations") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        XRelation rel = testutil::random_relation(rng, 2 + int(rng() % 11));
        const std::size_t k = 1 + rng() % rel.size();
        RankMatrix c = condprob_pij(rel, k);
        RankMatrix o = oracle_pij(rel, k);
        for (std::size_t i = 0; i < rel.size(); ++i) {
            for (std::size_t j = 1; j <= k; ++j) {
                REQUIRE(c.at(i, j) == doctest::Approx(o.at(i, j)).epsilon(1e-9).scale(1.0));
            }
        }
    }
}

TEST_CASE("condprob equals the baseline on medium random relations") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        XRelation rel = testutil::random_relation(rng, 300, 60);
        const std::size_t k = 1 + rng() % 32;
        RankMatrix c = condprob_pij(rel, k);
        RankMatrix b = baseline_pij(rel, k);
        for (std::size_t i = 0; i < rel.size(); ++i) {
            for (std::size_t j = 1; j <= k; ++j) {
                REQUIRE(c.at(i, j) == doctest::Approx(b.at(i, j)).epsilon(1e-9).scale(1.0));
            }
        }
        CHECK(c.checksum() == b.checksum());
    }
}

TEST_CASE("guards keep adversarial high-rho scans within tolerance") {
    // Dense rules at high membership push rho toward 1, where unguarded
    // back-substitution diverges; the scan must fall back instead.
    GenConfig cfg;
    cfg.mem_p = 0.5;
    cfg.rule_size = 10;
    cfg.n_tuples = 500;
    cfg.n_rules = 50;
    cfg.seed = 99;
    XRelation rel = generate(cfg);
    RankStats stats;
    RankMatrix c = condprob_pij(rel, 32, &stats);
    RankMatrix b = baseline_pij(rel, 32);
    for (std::size_t i = 0; i < rel.size(); ++i) {
        for (std::size_t j = 1; j <= 32; ++j) {
            REQUIRE(c.at(i, j) == doctest::Approx(b.at(i, j)).epsilon(1e-9).scale(1.0));
        }
    }
    CHECK(c.checksum() == b.checksum());
}

TEST_CASE("singleton relations collapse to the plain recurrence") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> prob(0.05, 0.95);
    std::vector<XTuple> xs;
    for (int i = 0; i < 30; ++i) {
        std::string id = "t" + std::to_string(i);
        xs.push_back(XTuple{id, {{id, id, 500.0 - i, prob(rng)}}});
    }
    XRelation rel = XRelation::build(std::move(xs));

    const std::size_t k = 8;
    ExclusionSet s;
    RVector r(k, 0.0);
    r[0] = 1.0;
    for (const TupleRecord& t : rel.by_score()) {
        // rho is always 0, so the solve is the identity: c = r.
        CHECK(s.probability(t.xtuple_id) == 0.0);
        check_close(solve_c(r, s.probability(t.xtuple_id)), r);
        StepOutput out = cond_step(s, r, t);
        check_close(out.r_next, dp_step(r, t.prob));
        r = out.r_next;
    }
}

TEST_CASE("with k = n each row sums to the tuple's probability") {
    std::mt19937_64 rng(53);
    XRelation rel = testutil::random_relation(rng, 60, 12);
    RankMatrix m = condprob_pij(rel, rel.size());
    for (std::size_t i = 0; i < rel.size(); ++i) {
        CHECK(m.tkp(i) == doctest::Approx(rel.by_score()[i].prob).epsilon(1e-9));
    }
}

TEST_CASE("operation count stays linear in k*n") {
    std::mt19937_64 rng(59);
    for (int n : {200, 400, 800}) {
        XRelation rel = testutil::random_relation(rng, n, n / 5);
        RankStats stats;
        condprob_pij(rel, 16, &stats);
        // 5 k-passes per tuple plus slack for rare fallbacks.
        CHECK(stats.op_count <= 8u * 16u * static_cast<std::uint64_t>(n));
    }
}
