#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uprank/rank_matrix.hpp"
#include "uprank/xrelation.hpp"

namespace uprank {

/// k-length rank-count distribution: entry j is the probability that
/// exactly j tuples of the scanned prefix appear in a random world
/// (truncated at k, zero-padded).
using RVector = std::vector<double>;

/// Counters shared by the rankers; every inner-loop arithmetic pass over a
/// k-vector adds k. Drives the complexity assertions in the benchmarks.
struct RankStats {
    std::uint64_t op_count = 0;
    std::uint64_t recompute_calls = 0;  // full r' recomputations (baseline)
    std::uint64_t fallback_steps = 0;   // guarded solves replaced by exact folds
    std::uint64_t refresh_steps = 0;    // carried-r exact refreshes
};

/// The x-tuples with at least one alternative in the scanned prefix,
/// each with its accumulated existence probability. Iteration follows
/// insertion order, which is fixed for reproducibility.
class ExclusionSet {
public:
    /// 0 when the x-tuple has not been scanned yet.
    double probability(std::string_view xtuple_id) const;

    bool contains(std::string_view xtuple_id) const;

    /// Inserts or overwrites.
    void set(std::string_view xtuple_id, double prob);

    const std::vector<std::pair<std::string, double>>& entries() const {
        return entries_;
    }

    std::size_t size() const { return entries_.size(); }

private:
    std::vector<std::pair<std::string, double>> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// One step of the r recurrence: shift mass by a tuple of probability p.
/// r_{i,0} = (1-p) r_{i-1,0};  r_{i,j} = p r_{i-1,j-1} + (1-p) r_{i-1,j}.
/// Throws ValidationError for p outside (0, 1].
RVector dp_step(const RVector& r, double p);

/// Rebuilds the r' distribution over the members of S with the excluded
/// x-tuple's probability treated as 0, folding dp_step from {1, 0, ...}.
/// O(|S| k). `excluded` may be absent from S (nothing to zero out).
RVector recompute_r(const ExclusionSet& s, std::string_view excluded, std::size_t k,
                    RankStats* stats = nullptr);

/// The prior-art O(k n^2) ranker: scan in score order, keep r incrementally
/// while tuples have no preceding alternative, recompute r' from scratch on
/// every exclusion step.
RankMatrix baseline_pij(const XRelation& rel, std::size_t k,
                        RankStats* stats = nullptr);

}  // namespace uprank
