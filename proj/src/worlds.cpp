#include "uprank/worlds.hpp"

#include <algorithm>
#include <limits>

namespace uprank {

std::uint64_t world_count(const XRelation& rel) {
    std::uint64_t count = 1;
    for (const XTuple& xt : rel.xtuples()) {
        std::uint64_t branches = xt.alternatives.size();
        if (1.0 - xt.existence() > 0.0) ++branches;  // the none-branch
        if (count > std::numeric_limits<std::uint64_t>::max() / branches) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        count *= branches;
    }
    return count;
}

std::vector<PossibleWorld> enumerate_worlds(const XRelation& rel, std::uint64_t cap) {
    const std::uint64_t count = world_count(rel);
    if (count > cap) {
        throw WorldCapError("relation has " + std::to_string(count) +
                            " possible worlds, above the cap of " + std::to_string(cap) +
                            "; use an analytic ranker instead");
    }

    // Position of each tuple in score order, keyed by tuple id.
    std::map<std::string, std::size_t> position;
    for (std::size_t pos = 0; pos < rel.by_score().size(); ++pos) {
        position.emplace(rel.by_score()[pos].tuple_id, pos);
    }

    std::vector<PossibleWorld> worlds;
    worlds.reserve(count);
    std::vector<std::size_t> members;

    auto dfs = [&](auto&& self, std::size_t xi, double prob) -> void {
        if (xi == rel.xtuples().size()) {
            PossibleWorld w;
            w.members = members;
            std::sort(w.members.begin(), w.members.end());
            w.prob = prob;
            worlds.push_back(std::move(w));
            return;
        }
        const XTuple& xt = rel.xtuples()[xi];
        for (const TupleRecord& t : xt.alternatives) {
            members.push_back(position.at(t.tuple_id));
            self(self, xi + 1, prob * t.prob);
            members.pop_back();
        }
        const double none = 1.0 - xt.existence();
        if (none > 0.0) self(self, xi + 1, prob * none);
    };
    dfs(dfs, 0, 1.0);
    return worlds;
}

RankMatrix oracle_pij(const XRelation& rel, std::size_t k, std::uint64_t cap) {
    const auto worlds = enumerate_worlds(rel, cap);
    std::vector<std::string> ids;
    ids.reserve(rel.size());
    for (const TupleRecord& t : rel.by_score()) ids.push_back(t.tuple_id);
    RankMatrix m(std::move(ids), k);
    for (const PossibleWorld& w : worlds) {
        const std::size_t top = std::min(k, w.members.size());
        for (std::size_t j = 1; j <= top; ++j) {
            m.at(w.members[j - 1], j) += w.prob;
        }
    }
    return m;
}

std::map<std::string, double> oracle_tkp(const XRelation& rel, std::size_t k,
                                         std::uint64_t cap) {
    const RankMatrix m = oracle_pij(rel, k, cap);
    std::map<std::string, double> tkp;
    for (std::size_t i = 0; i < m.rows(); ++i) tkp[m.tuple_id(i)] = m.tkp(i);
    return tkp;
}

}  // namespace uprank
