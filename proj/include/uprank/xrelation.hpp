#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uprank/errors.hpp"

namespace uprank {

/// One alternative of an x-tuple: a scored tuple with an existence
/// probability in (0, 1].
struct TupleRecord {
    std::string tuple_id;
    std::string xtuple_id;
    double score = 0.0;
    double prob = 0.0;
};

/// A set of mutually exclusive alternatives. At most one of them appears
/// in any possible world; the total probability budget is 1.
struct XTuple {
    std::string xtuple_id;
    std::vector<TupleRecord> alternatives;

    /// Pr(tau) = sum of alternative probabilities.
    double existence() const;
};

/// Slack allowed on the per-x-tuple probability sum, absorbing decimal
/// parsing error. Stored values are never renormalized.
inline constexpr double kExclusivitySlack = 1e-12;

/// An immutable, validated uncertain relation. Tuples are kept in a strict
/// total score order: descending score, ties broken by ascending tuple_id.
/// All probability computations downstream are defined w.r.t. this order.
class XRelation {
public:
    /// Validates and builds. Throws ValidationError naming the offending
    /// record on: prob outside (0,1], non-finite score, duplicate tuple_id,
    /// x-tuple probability sum > 1 + slack, empty x-tuple.
    static XRelation build(std::vector<XTuple> xtuples);

    /// Number of tuples across all x-tuples.
    std::size_t size() const { return sorted_.size(); }

    std::size_t xtuple_count() const { return xtuples_.size(); }

    const std::vector<XTuple>& xtuples() const { return xtuples_; }

    /// All tuples in score order (descending score, then ascending id).
    /// Deterministic across runs.
    const std::vector<TupleRecord>& by_score() const { return sorted_; }

    /// Pr(tau | X_i): probability mass of x-tuple `xtuple_id` among the
    /// first `i` tuples in score order. i = 0 gives 0; i = size() gives
    /// the full existence probability. Throws ValidationError on an
    /// unknown id, std::out_of_range on i > size().
    double prefix_existence(std::string_view xtuple_id, std::size_t i) const;

    const XTuple& xtuple(std::string_view xtuple_id) const;

    bool has_xtuple(std::string_view xtuple_id) const;

    /// True when every x-tuple holds exactly one alternative (all tuples
    /// independent).
    bool all_singletons() const;

private:
    XRelation() = default;

    std::vector<XTuple> xtuples_;
    std::vector<TupleRecord> sorted_;
    std::unordered_map<std::string, std::size_t> xtuple_index_;
    // Per x-tuple: (position in sorted_, prob) sorted by position, so a
    // prefix-existence query is a short ordered scan.
    std::vector<std::vector<std::pair<std::size_t, double>>> positions_;
};

enum class Format { csv, json };

/// CSV: header `xtuple_id,tuple_id,score,prob`, one tuple per row.
/// JSON: array of { xtuple_id, alternatives: [{tuple_id, score, prob}] }.
XRelation load_xrelation(std::istream& in, Format format);

void write_csv(const XRelation& rel, std::ostream& out);
void write_json(const XRelation& rel, std::ostream& out);

}  // namespace uprank
