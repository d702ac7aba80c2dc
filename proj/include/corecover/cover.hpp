#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "corecover/break.hpp"
#include "corecover/graph.hpp"
#include "corecover/leaf_removal.hpp"

namespace corecover {

// Vertex cover assembled from a deletion trace: the deleted nodes plus one
// endpoint per leaf-pairing matching edge of the core-free residual. The
// matched-neighbor endpoint goes into the cover, since the leaf's only
// residual edge is the matching edge itself.
struct CoverResult {
    std::vector<int> deleted;                      // first `transition` deletions
    std::vector<std::pair<int, int>> matching;     // (leaf, covered neighbor)
    std::vector<int> cover_nodes;                  // sorted
    bool valid = false;

    int size() const { return static_cast<int>(cover_nodes.size()); }
};

inline CoverResult cover_from_trace(const Graph& g, const DeletionTrace& trace) {
    CoverResult res;
    std::vector<std::uint8_t> present(g.node_count, 1);
    for (int i = 0; i < trace.transition; ++i) {
        int v = trace.deleted[i];
        if (v < 0 || v >= g.node_count || !present[v])
            throw std::invalid_argument("cover_from_trace: trace invalid for graph");
        present[v] = 0;
        res.deleted.push_back(v);
    }
    res.matching = leaf_pairing_matching(g, present);

    std::vector<std::uint8_t> in_cover(g.node_count, 0);
    for (int v : res.deleted) in_cover[v] = 1;
    for (auto [leaf, nb] : res.matching) {
        (void)leaf;
        in_cover[nb] = 1;
    }
    for (int v = 0; v < g.node_count; ++v)
        if (in_cover[v]) res.cover_nodes.push_back(v);

    // A failure here indicates a matching or bookkeeping bug, never bad input.
    for (auto [u, v] : g.edges)
        if (!in_cover[u] && !in_cover[v])
            throw std::logic_error("cover_from_trace: produced an invalid cover");
    if (res.size() != static_cast<int>(res.deleted.size() + res.matching.size()))
        throw std::logic_error("cover_from_trace: cover size accounting mismatch");
    res.valid = true;
    return res;
}

// Certified minimum vertex cover result. When the time budget runs out the
// search reports timed_out instead of an unverified answer.
struct ExactCover {
    int size = 0;
    std::vector<int> cover;
    long long nodes_explored = 0;
    bool timed_out = false;
    double elapsed_ms = 0.0;
};

namespace detail {

class MvcSolver {
public:
    MvcSolver(const Graph& g, double budget_seconds)
        : g_(g),
          deadline_(std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(budget_seconds))) {}

    ExactCover run() {
        auto start = std::chrono::steady_clock::now();
        best_size_ = 0;
        best_cover_.clear();
        for (int v = 0; v < g_.node_count; ++v) {
            if (g_.degree(v) > 0) {
                best_cover_.push_back(v);  // all non-isolated nodes: always a cover
                ++best_size_;
            }
        }
        std::vector<std::uint8_t> alive(g_.node_count, 1);
        std::vector<int> deg(g_.node_count);
        for (int v = 0; v < g_.node_count; ++v) deg[v] = g_.degree(v);
        std::vector<int> cover;
        recurse(alive, deg, cover);
        ExactCover out;
        out.size = best_size_;
        out.cover = best_cover_;
        std::sort(out.cover.begin(), out.cover.end());
        out.nodes_explored = nodes_;
        out.timed_out = timed_out_;
        out.elapsed_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        return out;
    }

private:
    void remove_node(std::vector<std::uint8_t>& alive, std::vector<int>& deg, int v) {
        alive[v] = 0;
        for (int w : g_.adj[v])
            if (alive[w]) --deg[w];
        deg[v] = 0;
    }

    // Degree-0 drop and the forced leaf rule: a degree-1 node's neighbor can
    // always be taken, so push it into the cover and peel both.
    void reduce(std::vector<std::uint8_t>& alive, std::vector<int>& deg,
                std::vector<int>& cover) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v = 0; v < g_.node_count; ++v) {
                if (!alive[v]) continue;
                if (deg[v] == 0) {
                    alive[v] = 0;
                    continue;
                }
                if (deg[v] == 1) {
                    int w = -1;
                    for (int nb : g_.adj[v]) {
                        if (alive[nb]) {
                            w = nb;
                            break;
                        }
                    }
                    cover.push_back(w);
                    remove_node(alive, deg, w);
                    remove_node(alive, deg, v);
                    changed = true;
                }
            }
        }
    }

    // Greedy matching: each matched edge needs at least one cover node.
    int matching_lower_bound(const std::vector<std::uint8_t>& alive,
                             const std::vector<int>& deg) const {
        std::vector<std::uint8_t> used(g_.node_count, 0);
        int lb = 0;
        for (int v = 0; v < g_.node_count; ++v) {
            if (!alive[v] || used[v] || deg[v] == 0) continue;
            for (int w : g_.adj[v]) {
                if (alive[w] && !used[w] && w != v) {
                    used[v] = used[w] = 1;
                    ++lb;
                    break;
                }
            }
        }
        return lb;
    }

    // With max degree <= 2 the reduced graph is a disjoint union of cycles
    // (paths would still have a degree-1 node); a C_k needs ceil(k/2) nodes.
    void close_cycles(std::vector<std::uint8_t>& alive, const std::vector<int>& deg,
                      std::vector<int>& cover) {
        std::vector<std::uint8_t> seen(g_.node_count, 0);
        for (int v = 0; v < g_.node_count; ++v) {
            if (!alive[v] || seen[v] || deg[v] == 0) continue;
            std::vector<int> cycle;
            int prev = -1, cur = v;
            do {
                seen[cur] = 1;
                cycle.push_back(cur);
                int nxt = -1;
                for (int nb : g_.adj[cur]) {
                    if (alive[nb] && nb != prev) {
                        nxt = nb;
                        break;
                    }
                }
                prev = cur;
                cur = nxt;
            } while (cur != v && cur >= 0);
            for (std::size_t i = 1; i < cycle.size(); i += 2) cover.push_back(cycle[i]);
            if (cycle.size() % 2 == 1) cover.push_back(cycle[0]);
        }
    }

    void recurse(std::vector<std::uint8_t> alive, std::vector<int> deg,
                 std::vector<int> cover) {
        if (timed_out_) return;
        if ((++nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) {
            timed_out_ = true;
            return;
        }
        reduce(alive, deg, cover);
        if (static_cast<int>(cover.size()) >= best_size_) return;

        int branch = -1;
        for (int v = 0; v < g_.node_count; ++v) {
            if (!alive[v]) continue;
            if (branch < 0 || deg[v] > deg[branch]) branch = v;
        }
        if (branch < 0 || deg[branch] == 0) {
            if (static_cast<int>(cover.size()) < best_size_) {
                best_size_ = static_cast<int>(cover.size());
                best_cover_ = cover;
            }
            return;
        }
        if (deg[branch] <= 2) {
            close_cycles(alive, deg, cover);
            if (static_cast<int>(cover.size()) < best_size_) {
                best_size_ = static_cast<int>(cover.size());
                best_cover_ = cover;
            }
            return;
        }
        if (static_cast<int>(cover.size()) + matching_lower_bound(alive, deg) >= best_size_)
            return;

        // branch A: the max-degree node joins the cover
        {
            auto alive_a = alive;
            auto deg_a = deg;
            auto cover_a = cover;
            cover_a.push_back(branch);
            remove_node(alive_a, deg_a, branch);
            recurse(std::move(alive_a), std::move(deg_a), std::move(cover_a));
        }
        // branch B: it stays out, so all its neighbors join
        {
            auto alive_b = alive;
            auto deg_b = deg;
            auto cover_b = cover;
            for (int nb : g_.adj[branch]) {
                if (alive_b[nb]) {
                    cover_b.push_back(nb);
                    remove_node(alive_b, deg_b, nb);
                }
            }
            remove_node(alive_b, deg_b, branch);
            recurse(std::move(alive_b), std::move(deg_b), std::move(cover_b));
        }
    }

    const Graph& g_;
    std::chrono::steady_clock::time_point deadline_;
    int best_size_ = 0;
    std::vector<int> best_cover_;
    long long nodes_ = 0;
    bool timed_out_ = false;
};

} // namespace detail

inline ExactCover exact_mvc(const Graph& g, double budget_seconds = 60.0) {
    detail::MvcSolver solver(g, budget_seconds);
    return solver.run();
}

// Cover numbers along the continuation i = t .. t+extra_steps of a recorded
// trace: each entry is i + (minimum cover of the residual). Extra deletions
// follow the trace's own method. Core-free residuals use the leaf pairing
// matching; in the rare case a deletion re-creates a core, the exact solver
// takes over so the chain stays well defined.
inline std::vector<int> proposition_chain(const Graph& g, const DeletionTrace& trace,
                                          int extra_steps) {
    detail::BreakDriver driver(g, trace.method);
    driver.replay(trace, trace.transition);
    int i = trace.transition;
    std::vector<int> chain;
    auto residual_cover = [&]() {
        const NodeState& st = driver.state();
        if (is_core_free(g, st.present))
            return static_cast<int>(leaf_pairing_matching(g, st.present).size());
        Induced ind = induced_subgraph(g, st.present);
        ExactCover ec = exact_mvc(ind.graph, 300.0);
        if (ec.timed_out) throw std::runtime_error("proposition_chain: exact solver timed out");
        return ec.size;
    };
    chain.push_back(i + residual_cover());
    for (int k = 0; k < extra_steps; ++k) {
        driver.core_free();  // refresh scoring peel for HL-style continuation
        if (driver.step() < 0) break;
        ++i;
        chain.push_back(i + residual_cover());
    }
    return chain;
}

inline std::vector<int> proposition_chain(const Graph& g, const MethodSpec& spec,
                                          int extra_steps) {
    return proposition_chain(g, break_core(g, spec), extra_steps);
}

inline bool verify_proposition(const Graph& g, const DeletionTrace& trace, int extra_steps) {
    std::vector<int> chain = proposition_chain(g, trace, extra_steps);
    for (std::size_t k = 1; k < chain.size(); ++k)
        if (chain[k] < chain[k - 1]) return false;
    return true;
}

inline bool verify_proposition(const Graph& g, const MethodSpec& spec, int extra_steps) {
    return verify_proposition(g, break_core(g, spec), extra_steps);
}

// Deletes an exact optimal cover in ascending id order, finds the first
// core-free step t, and checks the decomposition identity
// |C_m| = t + M(residual) together with the bound t >= max(0, 2s - N).
inline bool verify_theorem_decomposition(const Graph& g, double budget_seconds = 300.0) {
    ExactCover ec = exact_mvc(g, budget_seconds);
    if (ec.timed_out)
        throw std::runtime_error("verify_theorem_decomposition: exact solver timed out");
    int s = ec.size;
    std::vector<std::uint8_t> present(g.node_count, 1);
    int t = 0;
    for (std::size_t k = 0; !is_core_free(g, present); ++k) {
        if (k >= ec.cover.size())
            throw std::logic_error("verify_theorem_decomposition: cover exhausted before core-free");
        present[ec.cover[k]] = 0;
        ++t;
    }
    int matching = static_cast<int>(leaf_pairing_matching(g, present).size());
    bool equality = (s == t + matching);
    bool bound = t >= std::max(0, 2 * s - g.node_count);
    return equality && bound;
}

} // namespace corecover
