#include "uprank/rank_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

namespace uprank {

RankMatrix::RankMatrix(std::vector<std::string> tuple_ids, std::size_t k)
    : tuple_ids_(std::move(tuple_ids)), k_(k), p_(tuple_ids_.size() * k, 0.0) {}

double RankMatrix::tkp(std::size_t i) const {
    double sum = 0.0;
    for (std::size_t j = 1; j <= k_; ++j) sum += at(i, j);
    return sum;
}

double RankMatrix::checksum() const {
    double sum = 0.0, comp = 0.0;
    for (double v : p_) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::round(sum * 1e9) / 1e9;
}

void RankMatrix::write_csv(std::ostream& out) const {
    out << "tuple_id,j,p_ij\n";
    char buf[32];
    for (std::size_t i = 0; i < rows(); ++i) {
        for (std::size_t j = 1; j <= k_; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", at(i, j));
            out << tuple_ids_[i] << ',' << j << ',' << buf << '\n';
        }
    }
}

}  // namespace uprank
