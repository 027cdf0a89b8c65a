#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "uprank/rank_matrix.hpp"
#include "uprank/xrelation.hpp"

namespace uprank {

/// One instantiation of the relation: at most one alternative per x-tuple.
/// Only worlds with probability > 0 are materialized.
struct PossibleWorld {
    /// Positions (into XRelation::by_score) of the tuples present, in
    /// ascending position = descending score order.
    std::vector<std::size_t> members;
    double prob = 0.0;
};

/// Default cap on the number of worlds the oracle is willing to enumerate.
inline constexpr std::uint64_t kDefaultWorldCap = std::uint64_t{1} << 24;

/// Number of worlds the relation would produce: product over x-tuples of
/// (|tau| + 1), with the empty branch dropped when Pr(tau) = 1. Saturates
/// at UINT64_MAX.
std::uint64_t world_count(const XRelation& rel);

/// Exhaustive enumeration by depth-first product over x-tuples. Throws
/// WorldCapError when world_count exceeds `cap`; probabilities of the
/// returned worlds sum to 1.
std::vector<PossibleWorld> enumerate_worlds(const XRelation& rel,
                                            std::uint64_t cap = kDefaultWorldCap);

/// Ground-truth p_{i,j}: sum of Pr(I) over worlds where tuple i holds the
/// j-th largest score. Exponential; the oracle every analytic ranker is
/// checked against at desk scale.
RankMatrix oracle_pij(const XRelation& rel, std::size_t k,
                      std::uint64_t cap = kDefaultWorldCap);

/// Ground-truth top-k probability per tuple: sum of Pr(I) over worlds
/// where the tuple ranks within the top k.
std::map<std::string, double> oracle_tkp(const XRelation& rel, std::size_t k,
                                         std::uint64_t cap = kDefaultWorldCap);

}  // namespace uprank
