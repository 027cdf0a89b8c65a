#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace uprank {

/// Dense n-by-k matrix of position probabilities: entry (i, j) is the
/// probability that the i-th tuple in score order holds rank j (j in 1..k)
/// across all possible worlds.
class RankMatrix {
public:
    RankMatrix(std::vector<std::string> tuple_ids, std::size_t k);

    std::size_t rows() const { return tuple_ids_.size(); }
    std::size_t k() const { return k_; }

    /// j is a rank position, 1-based.
    double& at(std::size_t i, std::size_t j) { return p_[i * k_ + (j - 1)]; }
    double at(std::size_t i, std::size_t j) const { return p_[i * k_ + (j - 1)]; }

    const std::string& tuple_id(std::size_t i) const { return tuple_ids_[i]; }

    /// tkp(t_i) = sum over j <= k of p_{i,j}.
    double tkp(std::size_t i) const;

    /// Kahan sum of all entries, rounded to 9 decimals. Equal across
    /// algorithms computing the same matrix; used as an equivalence witness.
    double checksum() const;

    /// CSV dump `tuple_id,j,p_ij`, identical layout for every ranker so
    /// outputs can be diffed directly.
    void write_csv(std::ostream& out) const;

private:
    std::vector<std::string> tuple_ids_;
    std::size_t k_;
    std::vector<double> p_;
};

}  // namespace uprank
