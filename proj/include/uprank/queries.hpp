#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uprank/condprob.hpp"
#include "uprank/rank_matrix.hpp"
#include "uprank/xrelation.hpp"

namespace uprank {

enum class Semantics { ukranks, global_topk, ptk, pk_topk };

const char* semantics_name(Semantics s);

struct QueryAnswer {
    Semantics semantics = Semantics::global_topk;
    std::size_t k = 0;
    std::optional<double> threshold;  // PT-k only
    /// (tuple_id, probability); for ukranks entry j-1 is the rank-j winner
    /// with its p_{i,j}, otherwise entries are sorted by tkp descending.
    std::vector<std::pair<std::string, double>> results;
    /// Tuples consumed; equals the matrix height unless early-stopped.
    std::size_t scan_depth = 0;
};

/// U-kRanks: for each rank position j <= k, the tuple maximizing p_{.,j}.
/// Ties go to the higher-score tuple (the matrix is in score order, so the
/// first maximal row wins). The same tuple may win several positions.
QueryAnswer ukranks(const RankMatrix& pij, std::size_t k);

/// Global-Topk: the k tuples of highest tkp, ties by higher score then
/// smaller tuple_id (i.e. row order).
QueryAnswer global_topk(const RankMatrix& pij, std::size_t k);

/// PT-k: every tuple with tkp >= threshold, sorted by tkp descending.
/// Throws ValidationError for threshold outside (0, 1].
QueryAnswer ptk(const RankMatrix& pij, std::size_t k, double threshold);

/// Pk-topk: Global-Topk restricted to independent (all-singleton)
/// relations; throws ValidationError when `rel` has a multi-alternative
/// x-tuple.
QueryAnswer pk_topk(const XRelation& rel, const RankMatrix& pij, std::size_t k);

/// Sum of the r entries: no unseen tuple's top-k probability can exceed
/// it, and it never increases as the scan advances.
double upper_bound(const RVector& r);

/// The early-stopping Global-Topk scan: size-k min-heap keyed by tkp,
/// stop once the heap minimum is >= the running upper bound. Answer set
/// equals global_topk over the full matrix; scan_depth records where the
/// scan stopped.
QueryAnswer topk_generator(const XRelation& rel, std::size_t k,
                           RankStats* stats = nullptr);

/// PT-k with the same bound used to stop early: once the bound drops
/// below the threshold no unseen tuple can qualify.
QueryAnswer ptk_early_stop(const XRelation& rel, std::size_t k, double threshold,
                           RankStats* stats = nullptr);

/// CSV: header `rank,tuple_id,probability,scan_depth`.
void write_csv(const QueryAnswer& ans, std::ostream& out);

/// JSON envelope echoing semantics/k/threshold plus the result list.
void write_json(const QueryAnswer& ans, std::ostream& out);

}  // namespace uprank
