#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uprank/condprob.hpp"
#include "uprank/datagen.hpp"
#include "uprank/errors.hpp"
#include "uprank/queries.hpp"
#include "uprank/rank_baseline.hpp"
#include "uprank/worlds.hpp"
#include "uprank/xrelation.hpp"

namespace {

using namespace uprank;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInfeasible = 4;

Format format_for(const std::string& path, const std::string& flag) {
    if (flag == "json") return Format::json;
    if (flag == "csv") return Format::csv;
    return path.size() > 5 && path.substr(path.size() - 5) == ".json" ? Format::json
                                                                      : Format::csv;
}

XRelation load_file(const std::string& path, const std::string& format_flag) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return load_xrelation(in, format_for(path, format_flag));
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw ParseError("cannot open " + path + " for writing");
    return file;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

RankMatrix run_algo(const XRelation& rel, const std::string& algo, std::size_t k,
                    RankStats* stats) {
    if (algo == "cp") return condprob_pij(rel, k, stats);
    if (algo == "baseline") return baseline_pij(rel, k, stats);
    if (algo == "oracle") return oracle_pij(rel, k);
    throw ParseError("unknown algorithm: " + algo);
}

// ---------------------------------------------------------------- bench --

struct BenchRow {
    std::string algo;
    std::string param_name;
    double param_value = 0.0;
    std::size_t k = 0;
    GenConfig cfg;
    int rep = 0;
    double wall_time = 0.0;
    std::uint64_t op_count = 0;
    double checksum = 0.0;
};

struct BenchPoint {
    GenConfig cfg;
    std::size_t k = 0;
    double param_value = 0.0;
    std::optional<double> threshold;  // the PT-k "p" axis
};

std::vector<BenchPoint> build_grid(const std::string& vary, bool full_scale) {
    const int scale = full_scale ? 10 : 1;
    GenConfig base;
    base.n_tuples = 2000 * scale;
    base.n_rules = 200 * scale;
    std::size_t base_k = 20 * scale;

    std::vector<BenchPoint> grid;
    auto add = [&](GenConfig cfg, std::size_t k, double value,
                   std::optional<double> thr = std::nullopt) {
        grid.push_back({cfg, k, value, thr});
    };
    if (vary == "mem-p") {
        for (double v : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            GenConfig c = base;
            c.mem_p = v;
            add(c, base_k, v);
        }
    } else if (vary == "p") {
        for (double v : {0.1, 0.3, 0.5, 0.7, 0.9}) add(base, base_k, v, v);
    } else if (vary == "k") {
        for (std::size_t v : {1, 2, 3, 4, 5}) add(base, base_k * v, double(base_k * v));
    } else if (vary == "rule") {
        for (std::size_t v : {5, 10, 15, 20, 25}) {
            GenConfig c = base;
            c.rule_size = v;
            add(c, base_k, double(v));
        }
    } else if (vary == "tuples") {
        for (std::size_t v = 1; v <= 5; ++v) {
            GenConfig c = base;
            c.n_tuples = base.n_tuples * v;
            c.n_rules = base.n_rules * v;  // keep the rule density fixed
            add(c, base_k, double(c.n_tuples));
        }
    } else if (vary == "rules") {
        for (std::size_t v = 1; v <= 5; ++v) {
            GenConfig c = base;
            c.n_rules = 50 * scale * v;
            add(c, base_k, double(c.n_rules));
        }
    } else {
        throw ParseError("unknown sweep axis: " + vary);
    }
    return grid;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "algo,param_name,param_value,k,n_tuples,n_rules,rule_size,mem_p,rep,"
           "wall_time,op_count,checksum\n";
    char buf[256];
    for (const BenchRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%zu,%zu,%zu,%zu,%.17g,%d,%.6f,%llu,%.9f",
                      r.param_value, r.k, r.cfg.n_tuples, r.cfg.n_rules,
                      r.cfg.rule_size, r.cfg.mem_p, r.rep, r.wall_time,
                      static_cast<unsigned long long>(r.op_count), r.checksum);
        out << r.algo << ',' << r.param_name << ',' << buf << '\n';
    }
}

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Render time/op_count curves from bench.csv (written next to this script)."""
import csv
import os
import sys
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "bench.csv")
rows = list(csv.DictReader(open(path)))
if not rows:
    sys.exit("no rows in " + path)

param = rows[0]["param_name"]
series = defaultdict(lambda: defaultdict(list))
for r in rows:
    series[r["algo"]][float(r["param_value"])].append(
        (float(r["wall_time"]), float(r["op_count"])))

fig, axes = plt.subplots(1, 2, figsize=(11, 4))
for metric, ax, label in ((0, axes[0], "wall time (s)"), (1, axes[1], "op count")):
    for algo, pts in sorted(series.items()):
        xs = sorted(pts)
        ys = [sum(v[metric] for v in pts[x]) / len(pts[x]) for x in xs]
        ax.plot(xs, ys, marker="o", label=algo)
    ax.set_xlabel(param)
    ax.set_ylabel(label)
    if param in ("#tuple", "k", "#rule"):
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.legend()
fig.suptitle(f"vary {param}")
fig.tight_layout()
out = os.path.join(here, f"bench_{param.replace('#', 'n_').replace('|', '')}.png")
fig.savefig(out, dpi=150)
print("wrote", out)
)PY";

int run_bench(const std::string& vary, const std::vector<std::string>& algos,
              int reps, const std::string& out_dir, bool full_scale,
              unsigned jobs, std::uint64_t seed) {
    const char* names[] = {"mem-p", "p", "k", "rule", "tuples", "rules"};
    std::string param_name;
    for (const char* n : names) {
        if (vary == n) param_name = n;
    }
    if (param_name.empty()) throw ParseError("unknown sweep axis: " + vary);

    std::vector<BenchPoint> grid = build_grid(vary, full_scale);
    for (BenchPoint& p : grid) p.cfg.seed = seed;

    std::vector<std::vector<BenchRow>> results(grid.size());
    std::mutex log_mu;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= grid.size()) return;
            const BenchPoint& pt = grid[idx];
            XRelation rel = [&] {
                try {
                    return generate(pt.cfg);
                } catch (const InfeasibleError& e) {
                    std::scoped_lock lk(log_mu);
                    std::cerr << "warning: skipping " << param_name << "="
                              << pt.param_value << ": " << e.what() << '\n';
                    return XRelation::build({});
                }
            }();
            if (rel.size() == 0) continue;
            for (const std::string& algo : algos) {
                for (int rep = 0; rep < reps; ++rep) {
                    RankStats stats;
                    const auto t0 = std::chrono::steady_clock::now();
                    RankMatrix m = run_algo(rel, algo, pt.k, &stats);
                    double wall = seconds_since(t0);
                    if (pt.threshold) {
                        const auto q0 = std::chrono::steady_clock::now();
                        ptk(m, pt.k, *pt.threshold);
                        wall += seconds_since(q0);
                    }
                    results[idx].push_back({algo, param_name, pt.param_value, pt.k,
                                            pt.cfg, rep, wall, stats.op_count,
                                            m.checksum()});
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    std::vector<BenchRow> rows;
    for (const auto& r : results) rows.insert(rows.end(), r.begin(), r.end());

    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir + "/bench.csv");
    write_bench_csv(rows, csv);
    std::ofstream plot(out_dir + "/plot_bench.py");
    plot << kPlotScript;
    std::cerr << "wrote " << out_dir << "/bench.csv (" << rows.size()
              << " rows) and plot_bench.py\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic top-k ranking over uncertain relations"};
    app.require_subcommand(1);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "Generate a synthetic relation (CSV)");
    GenConfig cfg;
    std::string gen_out;
    gen->add_option("--mem-p", cfg.mem_p, "Expected membership probability");
    gen->add_option("--rule-size", cfg.rule_size, "Average alternatives per rule");
    gen->add_option("--n-tuples", cfg.n_tuples, "Total tuples");
    gen->add_option("--n-rules", cfg.n_rules, "Multi-alternative rules");
    gen->add_option("--seed", cfg.seed, "RNG seed");
    gen->add_option("--out,-o", gen_out, "Output path (default stdout)");

    // --- rank ---
    auto* rank = app.add_subcommand("rank", "Compute the n-by-k rank matrix");
    std::string rank_in, rank_out, rank_algo = "cp", rank_fmt = "auto";
    std::size_t rank_k = 20;
    bool rank_stats = false;
    rank->add_option("--in,-i", rank_in, "Input relation")->required();
    rank->add_option("--algo", rank_algo, "cp | baseline | oracle")
        ->check(CLI::IsMember({"cp", "baseline", "oracle"}));
    rank->add_option("--k,-k", rank_k, "Rank depth");
    rank->add_option("--format", rank_fmt, "csv | json (default: by extension)");
    rank->add_option("--out,-o", rank_out, "Output path (default stdout)");
    rank->add_flag("--stats", rank_stats, "Print timing/op stats to stderr");

    // --- query ---
    auto* query = app.add_subcommand("query", "Answer a top-k query");
    std::string q_in, q_out, q_sem = "globaltopk", q_fmt = "auto";
    std::size_t q_k = 20;
    double q_threshold = 0.0;
    bool q_early = false, q_json = false;
    query->add_option("--in,-i", q_in, "Input relation")->required();
    query->add_option("--semantics", q_sem, "ukranks | globaltopk | ptk | pktopk")
        ->check(CLI::IsMember({"ukranks", "globaltopk", "ptk", "pktopk"}));
    query->add_option("--k,-k", q_k, "Rank depth");
    auto* thr = query->add_option("--threshold", q_threshold, "PT-k threshold");
    query->add_flag("--early-stop", q_early,
                    "Stop the scan once the bound allows (globaltopk/ptk)");
    query->add_flag("--json", q_json, "Emit JSON instead of CSV");
    query->add_option("--format", q_fmt, "Input format: csv | json");
    query->add_option("--out,-o", q_out, "Output path (default stdout)");

    // --- worlds ---
    auto* worlds = app.add_subcommand("worlds", "Enumerate possible worlds");
    std::string w_in, w_out, w_fmt = "auto";
    worlds->add_option("--in,-i", w_in, "Input relation")->required();
    worlds->add_option("--format", w_fmt, "Input format: csv | json");
    worlds->add_option("--out,-o", w_out, "Output path (default stdout)");

    // --- bench ---
    auto* bench = app.add_subcommand("bench", "Sweep one parameter and record cost");
    std::string b_vary = "tuples", b_dir = "bench_out";
    std::vector<std::string> b_algos{"cp", "baseline"};
    int b_reps = 1;
    bool b_full = false;
    unsigned b_jobs = 1;
    std::uint64_t b_seed = 42;
    bench->add_option("--vary", b_vary, "mem-p | rule | k | p | tuples | rules")
        ->check(CLI::IsMember({"mem-p", "rule", "k", "p", "tuples", "rules"}));
    bench->add_option("--algos", b_algos, "Algorithms to run")->delimiter(',');
    bench->add_option("--reps", b_reps, "Repetitions per point");
    bench->add_option("--out-dir", b_dir, "Output directory");
    bench->add_flag("--full-scale", b_full, "Use the full-size grid (10x)");
    bench->add_option("--jobs", b_jobs, "Concurrent sweep points");
    bench->add_option("--seed", b_seed, "Generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            GenReport report;
            XRelation rel = generate(cfg, &report);
            std::ofstream file;
            write_csv(rel, open_out(file, gen_out));
            std::cerr << "generated " << rel.size() << " tuples, "
                      << report.rescale_events << " rules rescaled, mean prob "
                      << report.mean_prob << '\n';
        } else if (rank->parsed()) {
            XRelation rel = load_file(rank_in, rank_fmt);
            RankStats stats;
            const auto t0 = std::chrono::steady_clock::now();
            RankMatrix m = run_algo(rel, rank_algo, rank_k, &stats);
            const double wall = seconds_since(t0);
            std::ofstream file;
            m.write_csv(open_out(file, rank_out));
            if (rank_stats) {
                nlohmann::json j{{"algo", rank_algo},
                                 {"k", rank_k},
                                 {"n", rel.size()},
                                 {"wall_time", wall},
                                 {"op_count", stats.op_count},
                                 {"recompute_calls", stats.recompute_calls},
                                 {"fallback_steps", stats.fallback_steps},
                                 {"refresh_steps", stats.refresh_steps},
                                 {"checksum", m.checksum()}};
                std::cerr << j.dump() << '\n';
            }
        } else if (query->parsed()) {
            XRelation rel = load_file(q_in, q_fmt);
            QueryAnswer ans;
            if (q_sem == "ptk") {
                if (thr->count() == 0) {
                    throw ValidationError("ptk requires --threshold");
                }
                ans = q_early ? ptk_early_stop(rel, q_k, q_threshold)
                              : ptk(condprob_pij(rel, q_k), q_k, q_threshold);
            } else if (q_sem == "ukranks") {
                ans = ukranks(condprob_pij(rel, q_k), q_k);
            } else if (q_sem == "pktopk") {
                ans = pk_topk(rel, condprob_pij(rel, q_k), q_k);
            } else {
                ans = q_early ? topk_generator(rel, q_k)
                              : global_topk(condprob_pij(rel, q_k), q_k);
            }
            std::ofstream file;
            std::ostream& out = open_out(file, q_out);
            if (q_json) {
                write_json(ans, out);
            } else {
                write_csv(ans, out);
            }
        } else if (worlds->parsed()) {
            XRelation rel = load_file(w_in, w_fmt);
            std::ofstream file;
            std::ostream& out = open_out(file, w_out);
            out << "prob,members\n";
            char buf[32];
            for (const PossibleWorld& w : enumerate_worlds(rel)) {
                std::snprintf(buf, sizeof(buf), "%.17g", w.prob);
                out << buf << ',';
                for (std::size_t i = 0; i < w.members.size(); ++i) {
                    if (i) out << ';';
                    out << rel.by_score()[w.members[i]].tuple_id;
                }
                out << '\n';
            }
        } else if (bench->parsed()) {
            return run_bench(b_vary, b_algos, b_reps, b_dir, b_full, b_jobs, b_seed);
        }
    } catch (const WorldCapError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}
