// Command-line front end: graph generation, single-run core breaking and
// cover construction, multi-method sweeps, small-instance exact-gap studies
// and spectral diagnostics.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 exact-solver timeout.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "corecover/break.hpp"
#include "corecover/common.hpp"
#include "corecover/cover.hpp"
#include "corecover/graph.hpp"
#include "corecover/sweep.hpp"

namespace {

using corecover::Graph;
using corecover::MethodSpec;
using json = nlohmann::ordered_json;

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw corecover::IoError("cannot open graph file " + path);
    corecover::LoadStats stats;
    Graph g = corecover::load_edge_list(in, &stats);
    if (stats.dropped_self_loops || stats.dropped_duplicates) {
        std::cerr << "warning: dropped " << stats.dropped_self_loops << " self-loop(s) and "
                  << stats.dropped_duplicates << " duplicate edge(s) from " << path << "\n";
    }
    return g;
}

MethodSpec build_method(const std::string& method, const std::string& update, int l_order,
                        int ci_radius, double pr_damping, double tol, bool approx_literal) {
    MethodSpec spec = MethodSpec::parse(method);
    if (update == "approx") {
        if (spec.kind != corecover::Method::HL)
            throw std::invalid_argument("--update approx only applies to --method hl");
        spec.kind = corecover::Method::HLApprox;
    }
    spec.l_order = l_order;
    spec.ci_radius = ci_radius;
    spec.pr_damping = pr_damping;
    spec.tol = tol;
    spec.approx_literal_pseudocode = approx_literal;
    return spec;
}

std::vector<double> parse_degrees(const std::string& text) {
    // accepts "3..10" or a comma list "3,4,5"
    std::vector<double> out;
    auto range_pos = text.find("..");
    if (range_pos != std::string::npos) {
        double lo = std::stod(text.substr(0, range_pos));
        double hi = std::stod(text.substr(range_pos + 2));
        for (double d = lo; d <= hi + 1e-9; d += 1.0) out.push_back(d);
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    if (out.empty()) throw std::invalid_argument("empty degree list");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"corecover: leaf-removal core breaking and vertex covers"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a random graph edge list");
    std::string gen_model = "er", gen_output;
    int gen_nodes = 1000;
    double gen_degree = 4.0;
    std::uint64_t gen_seed = 1;
    gen->add_option("--model", gen_model, "er or sf")->check(CLI::IsMember({"er", "sf"}));
    gen->add_option("--nodes", gen_nodes, "node count")->required();
    gen->add_option("--avg-degree", gen_degree, "average degree")->required();
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--output", gen_output, "output path (default stdout)");

    // break / cover
    std::string brk_graph, brk_method = "hl", brk_update = "exact";
    int brk_l = 1, brk_ci_radius = 2;
    double brk_damping = 0.85, brk_tol = 1e-10;
    bool brk_literal = false;
    auto add_break_opts = [&](CLI::App* cmd) {
        cmd->add_option("--graph", brk_graph, "edge list file")->required();
        cmd->add_option("--method", brk_method,
                        "hl, hl-approx, dc, kc, bc, cc, ci, hda, pr, ec");
        cmd->add_option("--update", brk_update, "hl state update: exact or approx")
            ->check(CLI::IsMember({"exact", "approx"}));
        cmd->add_option("--l", brk_l, "core influence walk length");
        cmd->add_option("--ci-radius", brk_ci_radius, "collective influence ball radius");
        cmd->add_option("--pr-damping", brk_damping, "pagerank damping");
        cmd->add_option("--tol", brk_tol, "pr/ec iteration tolerance");
        cmd->add_flag("--approx-pseudocode-literal", brk_literal,
                      "audit mode for the approximate state patch");
    };
    auto* brk = app.add_subcommand("break", "delete a graph into a core-free one (JSON record)");
    add_break_opts(brk);
    auto* cov = app.add_subcommand("cover", "like break, with the full cover detail (JSON)");
    add_break_opts(cov);

    // sweep
    auto* swp = app.add_subcommand("sweep", "multi-method benchmark sweep (CSV)");
    std::string swp_models = "er,sf", swp_degrees = "3..10", swp_methods = "hl,hl-approx,dc,hda";
    std::string swp_output = "sweep.csv";
    int swp_trials = 30, swp_nodes = 1000, swp_threads = 0;
    std::uint64_t swp_seed = 1;
    swp->add_option("--models", swp_models, "comma list: er,sf");
    swp->add_option("--degrees", swp_degrees, "range a..b or comma list");
    swp->add_option("--trials", swp_trials, "graphs per cell");
    swp->add_option("--nodes", swp_nodes, "nodes per graph");
    swp->add_option("--methods", swp_methods, "comma list of methods");
    swp->add_option("--seed", swp_seed, "base seed");
    swp->add_option("--output", swp_output, "CSV path")->required();
    swp->add_option("--threads", swp_threads, "worker threads (0 = hardware)");

    // exact-gap
    auto* gap = app.add_subcommand("exact-gap", "heuristic vs exact optimum on small ER (CSV)");
    std::string gap_nodes = "80,100,120", gap_degrees = "3..7", gap_output = "exact_gap.csv";
    int gap_trials = 30, gap_threads = 0;
    double gap_budget = 120.0;
    std::uint64_t gap_seed = 1;
    gap->add_option("--nodes", gap_nodes, "comma list of node counts");
    gap->add_option("--degrees", gap_degrees, "range a..b or comma list");
    gap->add_option("--trials", gap_trials, "graphs per cell");
    gap->add_option("--seed", gap_seed, "base seed");
    gap->add_option("--budget-seconds", gap_budget, "time budget per exact solve");
    gap->add_option("--output", gap_output, "CSV path")->required();
    gap->add_option("--threads", gap_threads, "worker threads (0 = hardware)");

    // lambda
    auto* lam = app.add_subcommand("lambda", "spectral estimate table for a graph (CSV)");
    std::string lam_graph, lam_output;
    int lam_max = 8;
    lam->add_option("--graph", lam_graph, "edge list file")->required();
    lam->add_option("--max-order", lam_max, "largest order l")->check(CLI::Range(1, 30));
    lam->add_option("--output", lam_output, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) {
            Graph g = gen_model == "er" ? corecover::generate_er(gen_nodes, gen_degree, gen_seed)
                                        : corecover::generate_sf(gen_nodes, gen_degree, gen_seed);
            std::vector<std::string> meta{
                "generator " + gen_model + " nodes=" + std::to_string(gen_nodes) +
                " avg_degree=" + corecover::format_degree(gen_degree) +
                " seed=" + std::to_string(gen_seed) + " corecover=" + corecover::kVersion};
            if (gen_output.empty()) {
                corecover::save_edge_list(g, std::cout, meta);
            } else {
                std::ofstream out(gen_output, std::ios::trunc);
                if (!out) throw corecover::IoError("cannot open output file " + gen_output);
                corecover::save_edge_list(g, out, meta);
            }
            return 0;
        }
        if (brk->parsed() || cov->parsed()) {
            MethodSpec spec = build_method(brk_method, brk_update, brk_l, brk_ci_radius,
                                           brk_damping, brk_tol, brk_literal);
            Graph g = load_graph_file(brk_graph);
            corecover::DeletionTrace trace = corecover::break_core(g, spec);
            corecover::CoverResult cover = corecover::cover_from_trace(g, trace);
            json rec;
            rec["file"] = brk_graph;
            rec["n"] = g.node_count;
            rec["m"] = g.edge_count();
            rec["method"] = spec.name();
            rec["update_mode"] = spec.update_mode();
            rec["deleted"] = trace.transition;
            rec["matching"] = static_cast<int>(cover.matching.size());
            rec["cover"] = cover.size();
            rec["valid"] = cover.valid;
            rec["elapsed_ms"] = trace.wall_ms;
            if (cov->parsed()) {
                json deleted = json::array(), matching = json::array(), nodes = json::array();
                for (int v : cover.deleted) deleted.push_back(g.labels[v]);
                for (auto [u, w] : cover.matching)
                    matching.push_back(json::array({g.labels[u], g.labels[w]}));
                for (int v : cover.cover_nodes) nodes.push_back(g.labels[v]);
                rec["deleted_nodes"] = deleted;
                rec["matching_edges"] = matching;
                rec["cover_nodes"] = nodes;
            }
            std::cout << rec.dump() << "\n";
            return 0;
        }
        if (swp->parsed()) {
            corecover::SweepConfig cfg;
            cfg.models.clear();
            std::stringstream ms(swp_models);
            std::string tok;
            while (std::getline(ms, tok, ','))
                if (!tok.empty()) {
                    if (tok != "er" && tok != "sf")
                        throw std::invalid_argument("unknown model '" + tok + "'");
                    cfg.models.push_back(tok);
                }
            cfg.degrees = parse_degrees(swp_degrees);
            cfg.trials = swp_trials;
            cfg.nodes = swp_nodes;
            std::stringstream meth(swp_methods);
            while (std::getline(meth, tok, ','))
                if (!tok.empty()) cfg.methods.push_back(MethodSpec::parse(tok));
            cfg.base_seed = swp_seed;
            cfg.out_path = swp_output;
            cfg.threads = swp_threads;
            corecover::run_sweep(cfg);
            return 0;
        }
        if (gap->parsed()) {
            corecover::ExactGapConfig cfg;
            cfg.nodes.clear();
            std::stringstream ns(gap_nodes);
            std::string tok;
            while (std::getline(ns, tok, ','))
                if (!tok.empty()) cfg.nodes.push_back(std::stoi(tok));
            cfg.degrees = parse_degrees(gap_degrees);
            cfg.trials = gap_trials;
            cfg.base_seed = gap_seed;
            cfg.budget_seconds = gap_budget;
            cfg.out_path = gap_output;
            cfg.threads = gap_threads;
            corecover::ExactGapOutcome outcome = corecover::run_exact_gap(cfg);
            if (outcome.completed == 0 && outcome.timeouts > 0) {
                std::cerr << "error: every exact solve timed out\n";
                return 3;
            }
            if (outcome.timeouts > 0)
                std::cerr << "warning: " << outcome.timeouts
                          << " trial(s) timed out and were excluded from the means\n";
            return 0;
        }
        if (lam->parsed()) {
            Graph g = load_graph_file(lam_graph);
            if (lam_output.empty()) {
                corecover::emit_lambda_table(g, lam_max, std::cout);
            } else {
                std::ofstream out(lam_output, std::ios::trunc);
                if (!out) throw corecover::IoError("cannot open output file " + lam_output);
                corecover::emit_lambda_table(g, lam_max, out);
            }
            return 0;
        }
    } catch (const corecover::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const corecover::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
