#pragma once

// Shared fixtures: the two worked examples used across the test suite and a
// small structured-random relation builder for oracle property tests.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "uprank/xrelation.hpp"

namespace testutil {

inline uprank::TupleRecord tr(std::string tid, std::string xid, double score,
                              double prob) {
    return {std::move(tid), std::move(xid), score, prob};
}

// Three x-tuples, four tuples; scores 100/90/80/70.
inline uprank::XRelation fig1a() {
    std::vector<uprank::XTuple> xs(3);
    xs[0].xtuple_id = "x1";
    xs[0].alternatives = {tr("t1", "x1", 100, 0.3), tr("t3", "x1", 80, 0.5)};
    xs[1].xtuple_id = "x2";
    xs[1].alternatives = {tr("t2", "x2", 90, 1.0)};
    xs[2].xtuple_id = "x3";
    xs[2].alternatives = {tr("t4", "x3", 70, 0.8)};
    return uprank::XRelation::build(std::move(xs));
}

// Eight tuples in four rules; score(t_i) decreasing in i.
inline uprank::XRelation table1() {
    auto s = [](int i) { return 100.0 - 10.0 * i; };
    std::vector<uprank::XTuple> xs(4);
    xs[0].xtuple_id = "x1";
    xs[0].alternatives = {tr("t1", "x1", s(1), 0.3), tr("t4", "x1", s(4), 0.4)};
    xs[1].xtuple_id = "x2";
    xs[1].alternatives = {tr("t2", "x2", s(2), 0.5), tr("t8", "x2", s(8), 0.2)};
    xs[2].xtuple_id = "x3";
    xs[2].alternatives = {tr("t3", "x3", s(3), 0.5), tr("t6", "x3", s(6), 0.5)};
    xs[3].xtuple_id = "x4";
    xs[3].alternatives = {tr("t5", "x4", s(5), 0.6), tr("t7", "x4", s(7), 0.3)};
    return uprank::XRelation::build(std::move(xs));
}

// fig1a with every tuple in its own x-tuple (independent variant).
inline uprank::XRelation fig1a_singletons() {
    std::vector<uprank::XTuple> xs(4);
    const char* ids[] = {"t1", "t2", "t3", "t4"};
    const double scores[] = {100, 90, 80, 70};
    const double probs[] = {0.3, 1.0, 0.5, 0.8};
    for (int i = 0; i < 4; ++i) {
        xs[i].xtuple_id = std::string("s") + ids[i];
        xs[i].alternatives = {tr(ids[i], xs[i].xtuple_id, scores[i], probs[i])};
    }
    return uprank::XRelation::build(std::move(xs));
}

// Random relation with arbitrary multi-alternative structure. Tuples are
// assigned to x-tuples uniformly; per-rule probability sums above 1 are
// scaled to a random total in (0.5, 1).
inline uprank::XRelation random_relation(std::mt19937_64& rng, int n,
                                         int max_xtuples = 0) {
    if (max_xtuples <= 0) max_xtuples = n;
    std::uniform_int_distribution<int> xt_count(1, max_xtuples);
    std::uniform_real_distribution<double> prob(0.05, 0.95);
    std::uniform_real_distribution<double> cap(0.5, 1.0);

    const int m = xt_count(rng);
    std::uniform_int_distribution<int> pick(0, m - 1);
    std::vector<uprank::XTuple> xs(m);
    for (int x = 0; x < m; ++x) xs[x].xtuple_id = "x" + std::to_string(x);

    std::vector<double> scores(n);
    for (int i = 0; i < n; ++i) scores[i] = 1000.0 - i;  // distinct by design
    std::shuffle(scores.begin(), scores.end(), rng);

    for (int i = 0; i < n; ++i) {
        const int x = pick(rng);
        xs[x].alternatives.push_back(
            tr("t" + std::to_string(i), xs[x].xtuple_id, scores[i], prob(rng)));
    }
    std::vector<uprank::XTuple> filled;
    for (uprank::XTuple& x : xs) {
        if (x.alternatives.empty()) continue;
        double sum = 0.0;
        for (const auto& t : x.alternatives) sum += t.prob;
        if (sum > 1.0) {
            const double scale = cap(rng) / sum;
            for (auto& t : x.alternatives) t.prob *= scale;
        }
        filled.push_back(std::move(x));
    }
    return uprank::XRelation::build(std::move(filled));
}

}  // namespace testutil
