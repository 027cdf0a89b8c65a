#include "uprank/xrelation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace uprank {

double XTuple::existence() const {
    double sum = 0.0;
    for (const auto& t : alternatives) sum += t.prob;
    return sum;
}

namespace {

void check_record(const TupleRecord& t) {
    if (!(t.prob > 0.0) || t.prob > 1.0) {
        throw ValidationError("tuple '" + t.tuple_id + "': prob " +
                              std::to_string(t.prob) + " outside (0, 1]");
    }
    if (!std::isfinite(t.score)) {
        throw ValidationError("tuple '" + t.tuple_id + "': non-finite score");
    }
}

// %.17g round-trips any double exactly and deterministically.
std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(std::string_view s, const std::string& context) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError(context + ": bad number '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

XRelation XRelation::build(std::vector<XTuple> xtuples) {
    XRelation rel;
    rel.xtuples_ = std::move(xtuples);

    std::set<std::string> seen_ids;
    for (std::size_t xi = 0; xi < rel.xtuples_.size(); ++xi) {
        const XTuple& xt = rel.xtuples_[xi];
        if (xt.alternatives.empty()) {
            throw ValidationError("x-tuple '" + xt.xtuple_id + "': no alternatives");
        }
        if (!rel.xtuple_index_.emplace(xt.xtuple_id, xi).second) {
            throw ValidationError("x-tuple '" + xt.xtuple_id + "': duplicate id");
        }
        double sum = 0.0;
        for (const TupleRecord& t : xt.alternatives) {
            check_record(t);
            if (t.xtuple_id != xt.xtuple_id) {
                throw ValidationError("tuple '" + t.tuple_id + "': owner mismatch ('" +
                                      t.xtuple_id + "' vs '" + xt.xtuple_id + "')");
            }
            if (!seen_ids.insert(t.tuple_id).second) {
                throw ValidationError("tuple '" + t.tuple_id + "': duplicate id");
            }
            sum += t.prob;
            rel.sorted_.push_back(t);
        }
        if (sum > 1.0 + kExclusivitySlack) {
            throw ValidationError("x-tuple '" + xt.xtuple_id + "': probability sum " +
                                  std::to_string(sum) + " > 1");
        }
    }

    std::sort(rel.sorted_.begin(), rel.sorted_.end(),
              [](const TupleRecord& a, const TupleRecord& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.tuple_id < b.tuple_id;
              });

    rel.positions_.resize(rel.xtuples_.size());
    for (std::size_t pos = 0; pos < rel.sorted_.size(); ++pos) {
        const TupleRecord& t = rel.sorted_[pos];
        rel.positions_[rel.xtuple_index_.at(t.xtuple_id)].emplace_back(pos, t.prob);
    }
    return rel;
}

double XRelation::prefix_existence(std::string_view xtuple_id, std::size_t i) const {
    if (i > sorted_.size()) {
        throw std::out_of_range("prefix length " + std::to_string(i) + " > n");
    }
    auto it = xtuple_index_.find(std::string(xtuple_id));
    if (it == xtuple_index_.end()) {
        throw ValidationError("unknown x-tuple '" + std::string(xtuple_id) + "'");
    }
    double sum = 0.0;
    for (const auto& [pos, prob] : positions_[it->second]) {
        if (pos >= i) break;
        sum += prob;
    }
    return sum;
}

const XTuple& XRelation::xtuple(std::string_view xtuple_id) const {
    auto it = xtuple_index_.find(std::string(xtuple_id));
    if (it == xtuple_index_.end()) {
        throw ValidationError("unknown x-tuple '" + std::string(xtuple_id) + "'");
    }
    return xtuples_[it->second];
}

bool XRelation::has_xtuple(std::string_view xtuple_id) const {
    return xtuple_index_.count(std::string(xtuple_id)) > 0;
}

bool XRelation::all_singletons() const {
    return std::all_of(xtuples_.begin(), xtuples_.end(),
                       [](const XTuple& x) { return x.alternatives.size() == 1; });
}

namespace {

XRelation load_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "xtuple_id,tuple_id,score,prob") {
        throw ParseError("bad CSV header: '" + line + "'");
    }

    std::vector<XTuple> xtuples;
    std::unordered_map<std::string, std::size_t> index;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            auto comma = rest.find(',');
            if (comma == std::string_view::npos) {
                fields.push_back(rest);
                break;
            }
            fields.push_back(rest.substr(0, comma));
            rest.remove_prefix(comma + 1);
        }
        const std::string ctx = "line " + std::to_string(lineno);
        if (fields.size() != 4) throw ParseError(ctx + ": expected 4 fields");
        TupleRecord t;
        t.xtuple_id = std::string(fields[0]);
        t.tuple_id = std::string(fields[1]);
        t.score = parse_double(fields[2], ctx);
        t.prob = parse_double(fields[3], ctx);
        if (t.xtuple_id.empty() || t.tuple_id.empty()) {
            throw ParseError(ctx + ": empty id");
        }
        auto [it, inserted] = index.emplace(t.xtuple_id, xtuples.size());
        if (inserted) xtuples.push_back(XTuple{t.xtuple_id, {}});
        xtuples[it->second].alternatives.push_back(std::move(t));
    }
    return XRelation::build(std::move(xtuples));
}

XRelation load_json(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("top-level JSON value must be an array");
    std::vector<XTuple> xtuples;
    for (const auto& jx : doc) {
        XTuple xt;
        try {
            xt.xtuple_id = jx.at("xtuple_id").get<std::string>();
            for (const auto& ja : jx.at("alternatives")) {
                TupleRecord t;
                t.xtuple_id = xt.xtuple_id;
                t.tuple_id = ja.at("tuple_id").get<std::string>();
                t.score = ja.at("score").get<double>();
                t.prob = ja.at("prob").get<double>();
                xt.alternatives.push_back(std::move(t));
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad JSON x-tuple: ") + e.what());
        }
        xtuples.push_back(std::move(xt));
    }
    return XRelation::build(std::move(xtuples));
}

}  // namespace

XRelation load_xrelation(std::istream& in, Format format) {
    return format == Format::csv ? load_csv(in) : load_json(in);
}

void write_csv(const XRelation& rel, std::ostream& out) {
    out << "xtuple_id,tuple_id,score,prob\n";
    for (const XTuple& xt : rel.xtuples()) {
        for (const TupleRecord& t : xt.alternatives) {
            out << t.xtuple_id << ',' << t.tuple_id << ',' << format_double(t.score)
                << ',' << format_double(t.prob) << '\n';
        }
    }
}

void write_json(const XRelation& rel, std::ostream& out) {
    nlohmann::json doc = nlohmann::json::array();
    for (const XTuple& xt : rel.xtuples()) {
        nlohmann::json jx;
        jx["xtuple_id"] = xt.xtuple_id;
        jx["alternatives"] = nlohmann::json::array();
        for (const TupleRecord& t : xt.alternatives) {
            jx["alternatives"].push_back(
                {{"tuple_id", t.tuple_id}, {"score", t.score}, {"prob", t.prob}});
        }
        doc.push_back(std::move(jx));
    }
    out << doc.dump(2) << '\n';
}

}  // namespace uprank
