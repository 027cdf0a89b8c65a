#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "uprank/rank_baseline.hpp"
#include "uprank/rank_matrix.hpp"
#include "uprank/xrelation.hpp"

namespace uprank {

/// Conditional rank-count distribution: entry j is the probability that
/// exactly j prefix tuples appear given that the current x-tuple
/// contributes none of them.
using CVector = std::vector<double>;

/// Solver refusal threshold: back-substitution divides by 1 - rho, so once
/// 1 - rho drops below this the scan falls back to an exact recompute.
inline constexpr double kEpsSolve = 1e-9;

/// Dust tolerance on computed probabilities; anything further out of
/// [0, 1] than this is a logic bug, not rounding.
inline constexpr double kProbSlack = 1e-9;

/// Back-substitution (the inverse of apply_rc):
///   c_0 = r_0 / (1 - rho);  c_j = (r_j - rho c_{j-1}) / (1 - rho).
/// Throws IllConditionedError when 1 - rho < kEpsSolve. Entries within
/// kProbSlack outside [0, 1] are clamped; larger violations throw
/// InternalError.
CVector solve_c(const RVector& r, double rho);

/// The forward direction:
///   r_0 = (1 - rho) c_0;  r_j = (1 - rho) c_j + rho c_{j-1}.
RVector apply_rc(const CVector& c, double rho);

struct StepOutput {
    std::vector<double> p_row;  // p_{i,1..k}, index j-1 holds rank j
    RVector r_next;
    double rho_after = 0.0;
};

/// One literal scan step: read rho for t's x-tuple from S, recover c by
/// solve_c, emit p_{i,j} = p(t) c_{j-1}, bump rho by p(t), advance r by
/// apply_rc, store the new rho back into S. O(k). Ill-conditioned solves
/// propagate; callers needing robustness use CondScan instead.
StepOutput cond_step(ExclusionSet& s, const RVector& r_prev, const TupleRecord& t);

/// Guarded O(k)-per-tuple scanner. Runs cond_step's arithmetic, but
/// alongside each value it carries a first-order error estimate obtained
/// by pushing random-signed rounding terms through the same recurrences.
/// The division by 1 - rho amplifies error geometrically when rho > 1/2;
/// when the estimate says a solve went bad (or rho is at the refusal
/// threshold) the step recomputes c exactly from the exclusion set, and
/// when the carried r has drifted it is refreshed the same way. Both
/// events are rare and O(|S| k), preserving the O(k n) total on
/// non-adversarial inputs while keeping every emitted probability within
/// oracle tolerance on adversarial ones.
class CondScan {
public:
    CondScan(const XRelation& rel, std::size_t k, RankStats* stats = nullptr);

    /// Emits p_{i,1..k} for the next tuple in score order and advances the
    /// carried state. Valid until the next step() call.
    const std::vector<double>& step();

    bool done() const { return pos_ >= rel_->size(); }

    /// Tuples consumed so far.
    std::size_t position() const { return pos_; }

    /// The tuple the next step() will consume.
    const TupleRecord& peek() const { return rel_->by_score()[pos_]; }

    /// r_i after the last step.
    const RVector& r() const { return r_; }

    /// Sum of the carried r entries: an upper bound on the top-k
    /// probability of every unseen tuple.
    double upper_bound() const;

private:
    double rand_sign();
    void exact_refresh(std::string_view excluded, RVector& out, RVector& probe);

    const XRelation* rel_;
    std::size_t k_;
    RankStats* stats_;
    ExclusionSet s_;
    RVector r_;
    RVector rq_;  // signed error estimate carried with r_
    std::vector<double> c_, cq_, p_row_;
    std::size_t pos_ = 0;
    std::uint64_t rng_ = 0x9e3779b97f4a7c15ull;
};

/// The O(k n) ranker: fold the guarded scan over the whole relation.
RankMatrix condprob_pij(const XRelation& rel, std::size_t k,
                        RankStats* stats = nullptr);

}  // namespace uprank
