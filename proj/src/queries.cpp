#include "uprank/queries.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <queue>
#include <stdexcept>

#include <json.hpp>

#include "uprank/errors.hpp"

namespace uprank {
namespace {

void check_k(const RankMatrix& pij, std::size_t k) {
    if (k < 1 || k > pij.k() || k > pij.rows()) {
        throw std::out_of_range("k " + std::to_string(k) +
                                " outside the matrix dimensions");
    }
}

struct Entry {
    double tkp;
    std::size_t row;  // score-order position; smaller = higher score
    std::string tuple_id;
};

// Strict preference: higher tkp, ties to the higher-score tuple.
bool better(const Entry& a, const Entry& b) {
    if (a.tkp != b.tkp) return a.tkp > b.tkp;
    return a.row < b.row;
}

std::vector<std::pair<std::string, double>> top_rows(const RankMatrix& pij,
                                                     std::size_t count) {
    std::vector<Entry> entries;
    entries.reserve(pij.rows());
    for (std::size_t i = 0; i < pij.rows(); ++i) {
        entries.push_back({pij.tkp(i), i, pij.tuple_id(i)});
    }
    std::partial_sort(entries.begin(), entries.begin() + count, entries.end(), better);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.emplace_back(std::move(entries[i].tuple_id), entries[i].tkp);
    }
    return out;
}

}  // namespace

const char* semantics_name(Semantics s) {
    switch (s) {
        case Semantics::ukranks: return "ukranks";
        case Semantics::global_topk: return "globaltopk";
        case Semantics::ptk: return "ptk";
        case Semantics::pk_topk: return "pktopk";
    }
    return "?";
}

QueryAnswer ukranks(const RankMatrix& pij, std::size_t k) {
    check_k(pij, k);
    QueryAnswer ans{Semantics::ukranks, k, {}, {}, pij.rows()};
    for (std::size_t j = 1; j <= k; ++j) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pij.rows(); ++i) {
            if (pij.at(i, j) > pij.at(best, j)) best = i;
        }
        ans.results.emplace_back(pij.tuple_id(best), pij.at(best, j));
    }
    return ans;
}

QueryAnswer global_topk(const RankMatrix& pij, std::size_t k) {
    check_k(pij, k);
    QueryAnswer ans{Semantics::global_topk, k, {}, {}, pij.rows()};
    ans.results = top_rows(pij, k);
    return ans;
}

QueryAnswer ptk(const RankMatrix& pij, std::size_t k, double threshold) {
    check_k(pij, k);
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw ValidationError("ptk: threshold " + std::to_string(threshold) +
                              " outside (0, 1]");
    }
    QueryAnswer ans{Semantics::ptk, k, threshold, {}, pij.rows()};
    std::vector<Entry> hits;
    for (std::size_t i = 0; i < pij.rows(); ++i) {
        const double t = pij.tkp(i);
        if (t >= threshold) hits.push_back({t, i, pij.tuple_id(i)});
    }
    std::sort(hits.begin(), hits.end(), better);
    for (Entry& e : hits) ans.results.emplace_back(std::move(e.tuple_id), e.tkp);
    return ans;
}

QueryAnswer pk_topk(const XRelation& rel, const RankMatrix& pij, std::size_t k) {
    if (!rel.all_singletons()) {
        throw ValidationError(
            "pk_topk is defined for independent tuples only; the relation "
            "contains a multi-alternative x-tuple");
    }
    QueryAnswer ans = global_topk(pij, k);
    ans.semantics = Semantics::pk_topk;
    return ans;
}

double upper_bound(const RVector& r) {
    double sum = 0.0;
    for (double v : r) sum += v;
    return sum;
}

QueryAnswer topk_generator(const XRelation& rel, std::size_t k, RankStats* stats) {
    QueryAnswer ans{Semantics::global_topk, k, {}, {}, 0};
    CondScan scan(rel, k, stats);

    // Min-heap: the top is the entry the answer set would give up first.
    auto cmp = [](const Entry& a, const Entry& b) { return better(a, b); };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);

    while (!scan.done()) {
        const std::string& id = scan.peek().tuple_id;
        const std::size_t row = scan.position();
        const std::vector<double>& p_row = scan.step();
        double tkp = 0.0;
        for (double v : p_row) tkp += v;

        Entry cand{tkp, row, id};
        if (heap.size() < k) {
            heap.push(std::move(cand));
        } else if (better(cand, heap.top())) {
            heap.pop();
            heap.push(std::move(cand));
        }
        if (heap.size() == k && heap.top().tkp >= upper_bound(scan.r())) break;
    }
    ans.scan_depth = scan.position();

    std::vector<Entry> picked;
    picked.reserve(heap.size());
    while (!heap.empty()) {
        picked.push_back(heap.top());
        heap.pop();
    }
    std::sort(picked.begin(), picked.end(), better);
    for (Entry& e : picked) ans.results.emplace_back(std::move(e.tuple_id), e.tkp);
    return ans;
}

QueryAnswer ptk_early_stop(const XRelation& rel, std::size_t k, double threshold,
                           RankStats* stats) {
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw ValidationError("ptk: threshold " + std::to_string(threshold) +
                              " outside (0, 1]");
    }
    QueryAnswer ans{Semantics::ptk, k, threshold, {}, 0};
    CondScan scan(rel, k, stats);
    std::vector<Entry> hits;
    while (!scan.done()) {
        const std::string& id = scan.peek().tuple_id;
        const std::size_t row = scan.position();
        const std::vector<double>& p_row = scan.step();
        double tkp = 0.0;
        for (double v : p_row) tkp += v;
        if (tkp >= threshold) hits.push_back({tkp, row, id});
        if (upper_bound(scan.r()) < threshold) break;
    }
    ans.scan_depth = scan.position();
    std::sort(hits.begin(), hits.end(), better);
    for (Entry& e : hits) ans.results.emplace_back(std::move(e.tuple_id), e.tkp);
    return ans;
}

void write_csv(const QueryAnswer& ans, std::ostream& out) {
    out << "rank,tuple_id,probability,scan_depth\n";
    char buf[32];
    for (std::size_t i = 0; i < ans.results.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", ans.results[i].second);
        out << (i + 1) << ',' << ans.results[i].first << ',' << buf << ','
            << ans.scan_depth << '\n';
    }
}

void write_json(const QueryAnswer& ans, std::ostream& out) {
    nlohmann::json j;
    j["semantics"] = semantics_name(ans.semantics);
    j["k"] = ans.k;
    if (ans.threshold) {
        j["threshold"] = *ans.threshold;
    } else {
        j["threshold"] = nullptr;
    }
    j["scan_depth"] = ans.scan_depth;
    j["results"] = nlohmann::json::array();
    for (std::size_t i = 0; i < ans.results.size(); ++i) {
        j["results"].push_back({{"rank", i + 1},
                                {"tuple_id", ans.results[i].first},
                                {"probability", ans.results[i].second}});
    }
    out << j.dump(2) << '\n';
}

}  // namespace uprank
