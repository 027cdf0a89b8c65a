#include "uprank/condprob.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uprank/errors.hpp"

namespace uprank {
namespace {

constexpr double kUlp = 2.3e-16;     // one rounding's worth of relative error
constexpr double kSolveBad = 1e-11;  // probe level that rejects a solve
constexpr double kDrift = 1e-12;     // probe level that forces an r refresh

double clamp_prob(double v, const char* what) {
    if (v >= 0.0 && v <= 1.0) return v;
    if (v < 0.0 && v > -kProbSlack) return 0.0;
    if (v > 1.0 && v < 1.0 + kProbSlack) return 1.0;
    throw InternalError(std::string(what) + ": value " + std::to_string(v) +
                        " outside [0, 1] by more than rounding dust");
}

}  // namespace

CVector solve_c(const RVector& r, double rho) {
    // Boundary comparison on rho itself: 1 - (1 - 1e-9) rounds below 1e-9,
    // so comparing the difference would refuse the boundary it should admit.
    if (!(rho <= 1.0 - kEpsSolve)) {
        throw IllConditionedError("solve_c: rho = " + std::to_string(rho) +
                                  " is within 1e-9 of 1");
    }
    const double q = 1.0 - rho;
    CVector c(r.size());
    double prev = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
        prev = (r[j] - rho * prev) / q;
        c[j] = clamp_prob(prev, "solve_c");
    }
    return c;
}

RVector apply_rc(const CVector& c, double rho) {
    RVector r(c.size());
    double prev = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        r[j] = (1.0 - rho) * c[j] + rho * prev;
        prev = c[j];
    }
    return r;
}

StepOutput cond_step(ExclusionSet& s, const RVector& r_prev, const TupleRecord& t) {
    const double rho = s.probability(t.xtuple_id);
    const CVector c = solve_c(r_prev, rho);

    StepOutput out;
    out.p_row.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) out.p_row[j] = t.prob * c[j];
    out.rho_after = rho + t.prob;
    out.r_next = apply_rc(c, out.rho_after);
    s.set(t.xtuple_id, out.rho_after);
    return out;
}

CondScan::CondScan(const XRelation& rel, std::size_t k, RankStats* stats)
    : rel_(&rel),
      k_(k),
      stats_(stats),
      r_(k, 0.0),
      rq_(k, 0.0),
      c_(k),
      cq_(k),
      p_row_(k) {
    if (k < 1 || k > rel.size()) {
        throw std::out_of_range("k " + std::to_string(k) + " outside [1, n]");
    }
    r_[0] = 1.0;
}

double CondScan::rand_sign() {
    rng_ ^= rng_ << 13;
    rng_ ^= rng_ >> 7;
    rng_ ^= rng_ << 17;
    return (rng_ & 1) ? 1.0 : -1.0;
}

void CondScan::exact_refresh(std::string_view excluded, RVector& out, RVector& probe) {
    out = recompute_r(s_, excluded, k_, stats_);
    // Fresh error level: one rounding per dp_step fold.
    const double level = static_cast<double>(s_.size() + 1) * kUlp;
    for (std::size_t j = 0; j < k_; ++j) {
        probe[j] = rand_sign() * level * std::abs(out[j]);
    }
}

const std::vector<double>& CondScan::step() {
    if (done()) throw InternalError("CondScan::step called past the last tuple");
    const TupleRecord& t = rel_->by_score()[pos_];
    const double rho = s_.probability(t.xtuple_id);

    // Back-substitution, with the error probe pushed through the same
    // recurrence plus a random-signed rounding term per entry.
    bool solved = false;
    const double q = 1.0 - rho;
    if (rho <= 1.0 - kEpsSolve) {
        double prev = 0.0, qprev = 0.0, worst = 0.0;
        bool in_range = true;
        for (std::size_t j = 0; j < k_; ++j) {
            qprev = (rq_[j] - rho * qprev) / q +
                    rand_sign() * kUlp * (std::abs(r_[j]) + rho * std::abs(prev)) / q;
            prev = (r_[j] - rho * prev) / q;
            c_[j] = prev;
            cq_[j] = qprev;
            worst = std::max(worst, std::abs(qprev));
            if (prev < -kProbSlack || prev > 1.0 + kProbSlack) in_range = false;
        }
        if (stats_) stats_->op_count += 2 * k_;
        solved = in_range && worst <= kSolveBad;
    }
    if (!solved) {
        // The solve is untrustworthy (or refused outright): rebuild c
        // exactly from the exclusion set with this x-tuple left out.
        exact_refresh(t.xtuple_id, c_, cq_);
        if (stats_) ++stats_->fallback_steps;
    }
    for (std::size_t j = 0; j < k_; ++j) c_[j] = clamp_prob(c_[j], "cond scan c");

    for (std::size_t j = 0; j < k_; ++j) p_row_[j] = t.prob * c_[j];
    if (stats_) stats_->op_count += k_;

    const double rho2 = rho + t.prob;
    s_.set(t.xtuple_id, rho2);

    double prevc = 0.0, prevq = 0.0, drift = 0.0;
    for (std::size_t j = 0; j < k_; ++j) {
        const double rn = (1.0 - rho2) * c_[j] + rho2 * prevc;
        rq_[j] = (1.0 - rho2) * cq_[j] + rho2 * prevq + rand_sign() * kUlp * std::abs(rn);
        prevc = c_[j];
        prevq = cq_[j];
        r_[j] = rn;
        drift = std::max(drift, std::abs(rq_[j]));
    }
    if (stats_) stats_->op_count += 2 * k_;

    if (drift > kDrift) {
        exact_refresh("", r_, rq_);
        if (stats_) ++stats_->refresh_steps;
    }

    ++pos_;
    return p_row_;
}

double CondScan::upper_bound() const {
    double sum = 0.0;
    for (double v : r_) sum += v;
    return sum;
}

RankMatrix condprob_pij(const XRelation& rel, std::size_t k, RankStats* stats) {
    if (k < 1 || k > rel.size()) {
        throw std::out_of_range("k " + std::to_string(k) + " outside [1, n]");
    }
    std::vector<std::string> ids;
    ids.reserve(rel.size());
    for (const TupleRecord& t : rel.by_score()) ids.push_back(t.tuple_id);
    RankMatrix m(std::move(ids), k);

    CondScan scan(rel, k, stats);
    for (std::size_t i = 0; i < rel.size(); ++i) {
        const std::vector<double>& row = scan.step();
        for (std::size_t j = 1; j <= k; ++j) m.at(i, j) = row[j - 1];
    }
    return m;
}

}  // namespace uprank
