#include "uprank/rank_baseline.hpp"

#include <stdexcept>

#include "uprank/errors.hpp"

namespace uprank {

double ExclusionSet::probability(std::string_view xtuple_id) const {
    auto it = index_.find(std::string(xtuple_id));
    return it == index_.end() ? 0.0 : entries_[it->second].second;
}

bool ExclusionSet::contains(std::string_view xtuple_id) const {
    return index_.count(std::string(xtuple_id)) > 0;
}

void ExclusionSet::set(std::string_view xtuple_id, double prob) {
    auto [it, inserted] = index_.emplace(std::string(xtuple_id), entries_.size());
    if (inserted) {
        entries_.emplace_back(std::string(xtuple_id), prob);
    } else {
        entries_[it->second].second = prob;
    }
}

RVector dp_step(const RVector& r, double p) {
    if (!(p > 0.0) || p > 1.0) {
        throw ValidationError("dp_step: p " + std::to_string(p) + " outside (0, 1]");
    }
    RVector out(r.size());
    out[0] = (1.0 - p) * r[0];
    for (std::size_t j = 1; j < r.size(); ++j) {
        out[j] = p * r[j - 1] + (1.0 - p) * r[j];
    }
    return out;
}

RVector recompute_r(const ExclusionSet& s, std::string_view excluded, std::size_t k,
                    RankStats* stats) {
    RVector r(k, 0.0);
    r[0] = 1.0;
    for (const auto& [xid, prob] : s.entries()) {
        if (xid == excluded || prob <= 0.0) continue;
        r = dp_step(r, prob);
        if (stats) stats->op_count += k;
    }
    if (stats) ++stats->recompute_calls;
    return r;
}

RankMatrix baseline_pij(const XRelation& rel, std::size_t k, RankStats* stats) {
    if (k < 1 || k > rel.size()) {
        throw std::out_of_range("k " + std::to_string(k) + " outside [1, n]");
    }
    std::vector<std::string> ids;
    ids.reserve(rel.size());
    for (const TupleRecord& t : rel.by_score()) ids.push_back(t.tuple_id);
    RankMatrix m(std::move(ids), k);

    ExclusionSet s;
    RVector r(k, 0.0);
    r[0] = 1.0;

    for (std::size_t i = 0; i < rel.size(); ++i) {
        const TupleRecord& t = rel.by_score()[i];
        const double prior = s.probability(t.xtuple_id);
        if (prior > 0.0) {
            // Exclusion step: rebuild r' without this x-tuple, emit p from
            // it, then fold the updated x-tuple probability back in.
            RVector rp = recompute_r(s, t.xtuple_id, k, stats);
            for (std::size_t j = 1; j <= k; ++j) m.at(i, j) = t.prob * rp[j - 1];
            if (stats) stats->op_count += k;
            s.set(t.xtuple_id, prior + t.prob);
            r = dp_step(rp, prior + t.prob);
            if (stats) stats->op_count += k;
        } else {
            for (std::size_t j = 1; j <= k; ++j) m.at(i, j) = t.prob * r[j - 1];
            if (stats) stats->op_count += k;
            s.set(t.xtuple_id, t.prob);
            r = dp_step(r, t.prob);
            if (stats) stats->op_count += k;
        }
    }
    return m;
}

}  // namespace uprank
