#pragma once

#include <cstdint>

#include "uprank/xrelation.hpp"

namespace uprank {

/// Generator knobs; defaults match the benchmark's full-scale defaults.
struct GenConfig {
    double mem_p = 0.5;          // expected per-tuple membership probability
    std::size_t rule_size = 10;  // average alternatives per multi-tuple rule
    std::size_t n_tuples = 20000;
    std::size_t n_rules = 2000;  // multi-alternative x-tuples
    std::uint64_t seed = 42;
};

/// What generation had to do to keep the output valid.
struct GenReport {
    std::size_t rescale_events = 0;  // rules whose prob sum was scaled below 1
    double mean_prob = 0.0;          // empirical mean before rescaling
};

/// Deterministic synthetic x-Relation:
///  - the first n_rules * rule_size tuples are partitioned into n_rules
///    rules, two guaranteed members each, the rest assigned uniformly
///    (sizes multinomial around rule_size); remaining tuples are singletons;
///  - probabilities ~ uniform on the widest symmetric window around mem_p
///    inside (0, 1), so the pre-rescale mean is exactly mem_p;
///  - rules whose probabilities sum above 1 are rescaled by (1 - 1e-6)/sum;
///  - scores are distinct uniform reals.
/// All randomness comes from a seeded splitmix64 stream, so output is
/// reproducible across platforms. Throws InfeasibleError when the rule
/// structure cannot fit (see the message for the binding constraint).
XRelation generate(const GenConfig& cfg, GenReport* report = nullptr);

}  // namespace uprank
