#include "uprank/datagen.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "uprank/errors.hpp"

namespace uprank {
namespace {

// splitmix64 (Steele/Lea/Flood); stable across platforms by construction.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n).
    std::size_t below(std::size_t n) {
        return static_cast<std::size_t>(next() % n);
    }
};

std::string padded(char prefix, std::size_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, width, value);
    return buf;
}

}  // namespace

XRelation generate(const GenConfig& cfg, GenReport* report) {
    if (!(cfg.mem_p > 0.0) || !(cfg.mem_p < 1.0)) {
        throw InfeasibleError("mem_p must lie in (0, 1), got " +
                              std::to_string(cfg.mem_p));
    }
    if (cfg.n_tuples < 1) throw InfeasibleError("n_tuples must be positive");
    if (cfg.n_rules > 0) {
        if (cfg.rule_size < 2) {
            throw InfeasibleError("rule_size must be at least 2 for "
                                  "multi-alternative rules");
        }
        if (cfg.n_rules * cfg.rule_size > cfg.n_tuples) {
            throw InfeasibleError(
                "n_rules * rule_size = " +
                std::to_string(cfg.n_rules * cfg.rule_size) + " exceeds n_tuples = " +
                std::to_string(cfg.n_tuples) +
                "; shrink the rule structure (note: keeping per-rule sums below 1 "
                "without rescaling would additionally need mem_p <= " +
                std::to_string(1.0 / static_cast<double>(cfg.rule_size)) + ")");
        }
    }

    SplitMix64 rng{cfg.seed};

    // Rule sizes: two guaranteed members each, the remaining pool spread
    // uniformly, so sizes are multinomial with mean rule_size.
    std::vector<std::size_t> sizes(cfg.n_rules, 0);
    std::size_t in_rules = 0;
    if (cfg.n_rules > 0) {
        in_rules = cfg.n_rules * cfg.rule_size;
        std::fill(sizes.begin(), sizes.end(), std::size_t{2});
        for (std::size_t extra = in_rules - 2 * cfg.n_rules; extra > 0; --extra) {
            ++sizes[rng.below(cfg.n_rules)];
        }
    }

    // Probabilities: uniform on the widest symmetric window around mem_p
    // inside (0, 1); the mean is mem_p by symmetry. Scores: distinct
    // uniforms, redrawn on the (vanishingly rare) collision.
    const double half = std::min(cfg.mem_p, 1.0 - cfg.mem_p);
    std::set<double> seen_scores;
    auto draw_prob = [&] {
        double p;
        do {
            p = cfg.mem_p + (2.0 * rng.uniform() - 1.0) * half;
        } while (!(p > 0.0) || p > 1.0);
        return p;
    };
    auto draw_score = [&] {
        double s;
        do {
            s = rng.uniform() * 1e6;
        } while (!seen_scores.insert(s).second);
        return s;
    };

    const int tw = static_cast<int>(std::to_string(cfg.n_tuples).size());
    const int rw = static_cast<int>(std::to_string(cfg.n_rules + 1).size());

    double prob_sum = 0.0;
    std::size_t rescales = 0;
    std::vector<XTuple> xtuples;
    xtuples.reserve(cfg.n_rules + (cfg.n_tuples - in_rules));

    std::size_t tuple_no = 0;
    auto make_tuple = [&](const std::string& xid) {
        TupleRecord t;
        t.tuple_id = padded('t', ++tuple_no, tw);
        t.xtuple_id = xid;
        t.score = draw_score();
        t.prob = draw_prob();
        prob_sum += t.prob;
        return t;
    };

    for (std::size_t r = 0; r < cfg.n_rules; ++r) {
        XTuple xt;
        xt.xtuple_id = padded('r', r + 1, rw);
        for (std::size_t m = 0; m < sizes[r]; ++m) {
            xt.alternatives.push_back(make_tuple(xt.xtuple_id));
        }
        double sum = xt.existence();
        if (sum > 1.0) {
            const double scale = (1.0 - 1e-6) / sum;
            for (TupleRecord& t : xt.alternatives) t.prob *= scale;
            ++rescales;
        }
        xtuples.push_back(std::move(xt));
    }
    for (std::size_t i = in_rules; i < cfg.n_tuples; ++i) {
        XTuple xt;
        xt.xtuple_id = padded('s', i + 1, tw);
        xt.alternatives.push_back(make_tuple(xt.xtuple_id));
        xtuples.push_back(std::move(xt));
    }

    if (report) {
        report->rescale_events = rescales;
        report->mean_prob = prob_sum / static_cast<double>(cfg.n_tuples);
    }
    return XRelation::build(std::move(xtuples));
}

}  // namespace uprank
