#pragma once

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "corecover/break.hpp"
#include "corecover/common.hpp"
#include "corecover/cover.hpp"
#include "corecover/graph.hpp"
#include "corecover/spectral.hpp"

namespace corecover {

inline std::string format_degree(double d) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", d);
    return buf;
}

inline std::string format_fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

struct SweepConfig {
    std::vector<std::string> models{"er", "sf"};
    std::vector<double> degrees{3, 4, 5, 6, 7, 8, 9, 10};
    int trials = 30;
    int nodes = 1000;
    std::vector<MethodSpec> methods;
    std::uint64_t base_seed = 1;
    std::string out_path;
    int threads = 0;  // 0 = hardware concurrency
};

struct ResultRecord {
    std::string model;
    int n = 0;
    double avg_degree = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string method;
    std::string update_mode;
    int m = 0;
    int deleted = 0;
    int matching = 0;
    int cover = 0;
};

namespace detail {

inline std::uint64_t model_tag(const std::string& model) {
    std::uint64_t h = 0;
    for (char c : model) h = h * 131 + static_cast<unsigned char>(c);
    return h;
}

inline std::string record_key(const std::string& model, int n, const std::string& deg,
                              int trial, const std::string& method) {
    return model + "|" + std::to_string(n) + "|" + deg + "|" + std::to_string(trial) + "|" +
           method;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace detail

inline const char* kSweepHeader =
    "row,model,n,avg_degree,trial,seed,method,update_mode,m,deleted,matching,cover,"
    "sd_deleted,se_deleted,sd_cover,se_cover";

// Runs the sweep and writes the CSV. Rows are produced by a worker pool but
// written in canonical (model, degree, trial, method) order, so the bytes are
// independent of the thread count. If the output file already holds rows for
// this configuration they are reused instead of recomputed, which makes an
// interrupted sweep resumable; the file is rewritten in full either way.
inline void run_sweep(const SweepConfig& cfg) {
    if (cfg.methods.empty()) throw std::invalid_argument("run_sweep: no methods given");
    struct Task {
        std::string model;
        double degree;
        int trial;
    };
    std::vector<Task> tasks;
    for (const auto& model : cfg.models)
        for (double deg : cfg.degrees)
            for (int trial = 0; trial < cfg.trials; ++trial)
                tasks.push_back({model, deg, trial});

    // reuse rows from a previous partial run of the same configuration
    std::map<std::string, std::vector<ResultRecord>> existing;
    {
        std::ifstream in(cfg.out_path);
        std::string line;
        while (in && std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto cols = detail::split_csv(line);
            if (cols.size() < 12 || cols[0] != "data") continue;
            ResultRecord r;
            try {
                r.model = cols[1];
                r.n = std::stoi(cols[2]);
                r.avg_degree = std::stod(cols[3]);
                r.trial = std::stoi(cols[4]);
                r.seed = std::stoull(cols[5]);
                r.method = cols[6];
                r.update_mode = cols[7];
                r.m = std::stoi(cols[8]);
                r.deleted = std::stoi(cols[9]);
                r.matching = std::stoi(cols[10]);
                r.cover = std::stoi(cols[11]);
            } catch (const std::exception&) {
                continue;
            }
            if (r.n != cfg.nodes) continue;
            existing[detail::record_key(r.model, r.n, format_degree(r.avg_degree), r.trial,
                                        r.method)]
                .push_back(r);
        }
    }

    std::vector<std::vector<ResultRecord>> results(tasks.size());
    std::vector<std::uint8_t> done(tasks.size(), 0);
    std::atomic<std::size_t> next_task{0};
    std::mutex mu;
    std::condition_variable cv;
    std::string worker_error;

    auto run_task = [&](std::size_t ti) {
        const Task& task = tasks[ti];
        std::uint64_t seed = trial_seed(cfg.base_seed, detail::model_tag(task.model),
                                        task.degree, static_cast<std::uint64_t>(task.trial));
        std::vector<ResultRecord> rows;
        bool all_cached = true;
        for (const auto& spec : cfg.methods) {
            std::string key = detail::record_key(task.model, cfg.nodes,
                                                 format_degree(task.degree), task.trial,
                                                 spec.name());
            auto it = existing.find(key);
            bool found = false;
            if (it != existing.end()) {
                for (const auto& r : it->second) {
                    if (r.update_mode == spec.update_mode()) {
                        rows.push_back(r);
                        found = true;
                        break;
                    }
                }
            }
            if (!found) all_cached = false;
        }
        if (all_cached && rows.size() == cfg.methods.size()) return rows;

        rows.clear();
        Graph g = task.model == "er" ? generate_er(cfg.nodes, task.degree, seed)
                                     : generate_sf(cfg.nodes, task.degree, seed);
        for (const auto& spec : cfg.methods) {
            DeletionTrace trace = break_core(g, spec);
            CoverResult cover = cover_from_trace(g, trace);
            if (cover.size() != trace.transition + static_cast<int>(cover.matching.size()))
                throw std::logic_error("run_sweep: cover accounting mismatch");
            ResultRecord r;
            r.model = task.model;
            r.n = cfg.nodes;
            r.avg_degree = task.degree;
            r.trial = task.trial;
            r.seed = seed;
            r.method = spec.name();
            r.update_mode = spec.update_mode();
            r.m = g.edge_count();
            r.deleted = trace.transition;
            r.matching = static_cast<int>(cover.matching.size());
            r.cover = cover.size();
            rows.push_back(r);
        }
        return rows;
    };

    // open the output before any worker starts, so a bad path cannot leave
    // threads running past this scope
    std::ofstream out(cfg.out_path, std::ios::trunc);
    if (!out) throw IoError("run_sweep: cannot open output file " + cfg.out_path);

    unsigned want = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
    unsigned nthreads = static_cast<unsigned>(
        std::min<std::size_t>(want, std::max<std::size_t>(tasks.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nthreads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t ti = next_task.fetch_add(1);
                if (ti >= tasks.size()) return;
                std::vector<ResultRecord> rows;
                std::string error;
                try {
                    rows = run_task(ti);
                } catch (const std::exception& e) {
                    error = e.what();
                }
                {
                    std::lock_guard<std::mutex> lock(mu);
                    results[ti] = std::move(rows);
                    if (!error.empty() && worker_error.empty()) worker_error = error;
                    done[ti] = 1;
                }
                cv.notify_all();
            }
        });
    }

    out << "# corecover sweep v" << kVersion << "\n";
    {
        out << "# config: models=";
        for (std::size_t i = 0; i < cfg.models.size(); ++i)
            out << (i ? "," : "") << cfg.models[i];
        out << " degrees=";
        for (std::size_t i = 0; i < cfg.degrees.size(); ++i)
            out << (i ? "," : "") << format_degree(cfg.degrees[i]);
        out << " trials=" << cfg.trials << " nodes=" << cfg.nodes << " methods=";
        for (std::size_t i = 0; i < cfg.methods.size(); ++i)
            out << (i ? "," : "") << cfg.methods[i].name();
        out << " seed=" << cfg.base_seed << "\n";
    }
    out << "# trial seed = splitmix64 chain over (base seed, model, degree*1000, trial)\n";
    out << kSweepHeader << "\n";

    // stream rows in task order as soon as they are available
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        {
            std::unique_lock<std::mutex> lock(mu);
            cv.wait(lock, [&] { return done[ti] != 0; });
        }
        for (const auto& r : results[ti]) {
            out << "data," << r.model << ',' << r.n << ',' << format_degree(r.avg_degree)
                << ',' << r.trial << ',' << r.seed << ',' << r.method << ',' << r.update_mode
                << ',' << r.m << ',' << r.deleted << ',' << r.matching << ',' << r.cover
                << ",,,,\n";
            out.flush();
        }
    }
    for (auto& th : pool) th.join();
    if (!worker_error.empty()) throw std::runtime_error("run_sweep: " + worker_error);

    // aggregates are derived from the data rows and recomputable from them
    for (const auto& model : cfg.models) {
        for (double deg : cfg.degrees) {
            for (const auto& spec : cfg.methods) {
                std::vector<double> deleted, cover, matching;
                for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
                    if (tasks[ti].model != model || tasks[ti].degree != deg) continue;
                    for (const auto& r : results[ti]) {
                        if (r.method == spec.name() && r.update_mode == spec.update_mode()) {
                            deleted.push_back(r.deleted);
                            cover.push_back(r.cover);
                            matching.push_back(r.matching);
                        }
                    }
                }
                if (deleted.empty()) continue;
                auto mean = [](const std::vector<double>& xs) {
                    double s = 0.0;
                    for (double x : xs) s += x;
                    return s / static_cast<double>(xs.size());
                };
                auto sd = [&](const std::vector<double>& xs, double mu) {
                    if (xs.size() < 2) return -1.0;
                    double s = 0.0;
                    for (double x : xs) s += (x - mu) * (x - mu);
                    return std::sqrt(s / static_cast<double>(xs.size() - 1));
                };
                double mu_d = mean(deleted), mu_c = mean(cover), mu_m = mean(matching);
                double sd_d = sd(deleted, mu_d), sd_c = sd(cover, mu_c);
                double root_n = std::sqrt(static_cast<double>(deleted.size()));
                out << "agg," << model << ',' << cfg.nodes << ',' << format_degree(deg)
                    << ",,," << spec.name() << ',' << spec.update_mode() << ",,"
                    << format_fixed(mu_d) << ',' << format_fixed(mu_m) << ','
                    << format_fixed(mu_c) << ','
                    << (sd_d < 0 ? "" : format_fixed(sd_d)) << ','
                    << (sd_d < 0 ? "" : format_fixed(sd_d / root_n)) << ','
                    << (sd_c < 0 ? "" : format_fixed(sd_c)) << ','
                    << (sd_c < 0 ? "" : format_fixed(sd_c / root_n)) << "\n";
            }
        }
    }
    out.flush();
}

struct ExactGapConfig {
    std::vector<int> nodes{80, 100, 120};
    std::vector<double> degrees{3, 4, 5, 6, 7};
    int trials = 30;
    std::uint64_t base_seed = 1;
    double budget_seconds = 120.0;
    std::string out_path;
    int threads = 0;
};

struct ExactGapOutcome {
    int completed = 0;
    int timeouts = 0;
};

// Per-cell mean of 100 * (HL cover - exact optimum) / N over ER graphs.
// Timed-out trials are flagged, counted and excluded from the means.
inline ExactGapOutcome run_exact_gap(const ExactGapConfig& cfg) {
    struct Task {
        int n;
        double degree;
        int trial;
    };
    std::vector<Task> tasks;
    for (int n : cfg.nodes)
        for (double deg : cfg.degrees)
            for (int trial = 0; trial < cfg.trials; ++trial) tasks.push_back({n, deg, trial});

    struct Row {
        Task task;
        std::uint64_t seed;
        int m;
        int heuristic;
        int exact;
        bool timed_out;
    };
    std::ofstream out(cfg.out_path, std::ios::trunc);
    if (!out) throw IoError("run_exact_gap: cannot open output file " + cfg.out_path);

    std::vector<Row> rows(tasks.size());
    std::atomic<std::size_t> next_task{0};
    std::mutex err_mu;
    std::string worker_error;
    unsigned want = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
    unsigned nthreads = static_cast<unsigned>(
        std::min<std::size_t>(want, std::max<std::size_t>(tasks.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nthreads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t ti = next_task.fetch_add(1);
                if (ti >= tasks.size()) return;
                try {
                    const Task& t = tasks[ti];
                    std::uint64_t seed =
                        trial_seed(cfg.base_seed, detail::model_tag("er"), t.degree,
                                   static_cast<std::uint64_t>(t.trial));
                    Graph g = generate_er(t.n, t.degree, seed);
                    MethodSpec hl;
                    DeletionTrace trace = break_core(g, hl);
                    CoverResult cover = cover_from_trace(g, trace);
                    ExactCover ec = exact_mvc(g, cfg.budget_seconds);
                    if (!ec.timed_out && cover.size() < ec.size)
                        throw std::logic_error(
                            "run_exact_gap: heuristic beat the certified optimum");
                    rows[ti] = Row{t, seed, g.edge_count(), cover.size(), ec.size, ec.timed_out};
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (worker_error.empty()) worker_error = e.what();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (!worker_error.empty()) throw std::runtime_error("run_exact_gap: " + worker_error);

    out << "# corecover exact-gap v" << kVersion << "\n";
    out << "# config: model=er trials=" << cfg.trials << " seed=" << cfg.base_seed
        << " budget_s=" << format_degree(cfg.budget_seconds) << "\n";
    out << "row,n,avg_degree,trial,seed,m,hl_cover,exact_cover,gap_pct,status,trials_ok,timeouts\n";
    ExactGapOutcome outcome;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        const Row& r = rows[ti];
        double gap = 100.0 * (r.heuristic - r.exact) / static_cast<double>(r.task.n);
        out << "data," << r.task.n << ',' << format_degree(r.task.degree) << ','
            << r.task.trial << ',' << r.seed << ',' << r.m << ',' << r.heuristic << ','
            << (r.timed_out ? std::string("") : std::to_string(r.exact)) << ','
            << (r.timed_out ? std::string("") : format_fixed(gap)) << ','
            << (r.timed_out ? "timeout" : "ok") << ",,\n";
        if (r.timed_out)
            ++outcome.timeouts;
        else
            ++outcome.completed;
    }
    for (int n : cfg.nodes) {
        for (double deg : cfg.degrees) {
            double sum = 0.0;
            int ok = 0, bad = 0;
            for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
                if (tasks[ti].n != n || tasks[ti].degree != deg) continue;
                if (rows[ti].timed_out) {
                    ++bad;
                    continue;
                }
                sum += 100.0 * (rows[ti].heuristic - rows[ti].exact) / static_cast<double>(n);
                ++ok;
            }
            out << "agg," << n << ',' << format_degree(deg) << ",,,,,,"
                << (ok > 0 ? format_fixed(sum / ok) : std::string("")) << ",," << ok << ','
                << bad << "\n";
        }
    }
    return outcome;
}

// Spectral estimate table for a graph, states taken from an exact peel. The
// dense-oracle column repeats the same quantities from the materialized R
// matrix when 2M is within the dense guard used here (2000).
inline void emit_lambda_table(const Graph& g, int max_order, std::ostream& out) {
    std::vector<std::uint8_t> present(g.node_count, 1);
    NodeState st = exact_state(g, present);
    DirectedEdgeIndex idx = DirectedEdgeIndex::build(g, present);
    bool dense_ok = idx.m2 > 0 && idx.m2 <= 2000;

    std::vector<double> dense_sums;  // sum of entries of R^k * 1, k = 0 .. 2L+1
    double dense_radius = 0.0;
    if (dense_ok) {
        std::vector<double> r = build_r_matrix(g, st);
        int m2 = idx.m2;
        std::vector<double> v(m2, 1.0), next(m2);
        auto total = [&](const std::vector<double>& x) {
            double s = 0.0;
            for (double e : x) s += e;
            return s;
        };
        dense_sums.push_back(total(v));
        for (int k = 1; k <= 2 * max_order + 1; ++k) {
            for (int e = 0; e < m2; ++e) {
                double acc = 0.0;
                const double* row = r.data() + static_cast<std::size_t>(e) * m2;
                for (int f = 0; f < m2; ++f) acc += row[f] * v[f];
                next[e] = acc;
            }
            v.swap(next);
            dense_sums.push_back(total(v));
        }
        // spectral radius by shifted power iteration (R + I is aperiodic);
        // the eigen-residual stop avoids spurious transient plateaus
        std::vector<double> w(m2, 1.0 / std::sqrt(static_cast<double>(m2)));
        double rayleigh = 0.0;
        for (int it = 0; it < 200000; ++it) {
            for (int e = 0; e < m2; ++e) {
                double acc = w[e];
                const double* row = r.data() + static_cast<std::size_t>(e) * m2;
                for (int f = 0; f < m2; ++f) acc += row[f] * w[f];
                next[e] = acc;
            }
            rayleigh = 0.0;
            for (int e = 0; e < m2; ++e) rayleigh += w[e] * next[e];
            double resid = 0.0;
            for (int e = 0; e < m2; ++e)
                resid = std::max(resid, std::abs(next[e] - rayleigh * w[e]));
            double norm = 0.0;
            for (double x : next) norm += x * x;
            norm = std::sqrt(norm);
            if (norm == 0.0) {
                rayleigh = 0.0;
                break;
            }
            for (double& x : next) x /= norm;
            w.swap(next);
            if (resid < 1e-11 * std::max(1.0, rayleigh)) break;
        }
        dense_radius = std::max(0.0, rayleigh - 1.0);
    }

    out << "# corecover lambda v" << kVersion << "\n";
    out << "# nodes " << g.node_count << " edges " << g.edge_count() << " directed "
        << idx.m2 << "\n";
    if (dense_ok) out << "# dense_spectral_radius " << format_fixed(dense_radius, 12) << "\n";
    out << "l,family,lambda" << (dense_ok ? ",dense_lambda" : "") << "\n";
    for (int l = 1; l <= max_order; ++l) {
        for (auto family : {SpectralEstimate::Family::odd, SpectralEstimate::Family::even}) {
            SpectralEstimate est = lambda_power(g, st, l, family);
            out << l << ',' << (family == SpectralEstimate::Family::odd ? "odd" : "even")
                << ',' << format_fixed(est.value, 12);
            if (dense_ok) {
                int k = family == SpectralEstimate::Family::odd ? 2 * l : 2 * l + 1;
                double w = dense_sums[k];
                double exponent = family == SpectralEstimate::Family::odd
                                      ? 1.0 / (2.0 * l)
                                      : 1.0 / (2.0 * l + 1.0);
                out << ',' << format_fixed(std::pow(w / idx.m2, exponent), 12);
            }
            out << "\n";
        }
    }
}

} // namespace corecover
