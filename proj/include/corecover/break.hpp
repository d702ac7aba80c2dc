#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "corecover/centrality.hpp"
#include "corecover/graph.hpp"
#include "corecover/leaf_removal.hpp"
#include "corecover/spectral.hpp"

namespace corecover {

enum class Method { HL, HLApprox, DC, KC, BC, CC, CI, HDA, PR, EC };

struct MethodSpec {
    Method kind = Method::HL;
    int l_order = 1;          // Core Influence walk length
    int ci_radius = 2;        // collective influence ball radius
    double pr_damping = 0.85;
    double tol = 1e-10;       // PR / EC iteration tolerance
    bool approx_literal_pseudocode = false;  // audit mode for the patch update

    // HL, HL-approx, HDA and CI rescore after every deletion; the remaining
    // centralities are ranked once up front and consumed in order.
    bool adaptive() const {
        return kind == Method::HL || kind == Method::HLApprox || kind == Method::HDA ||
               kind == Method::CI;
    }

    const char* name() const {
        switch (kind) {
            case Method::HL: return "hl";
            case Method::HLApprox: return "hl-approx";
            case Method::DC: return "dc";
            case Method::KC: return "kc";
            case Method::BC: return "bc";
            case Method::CC: return "cc";
            case Method::CI: return "ci";
            case Method::HDA: return "hda";
            case Method::PR: return "pr";
            case Method::EC: return "ec";
        }
        return "?";
    }

    const char* update_mode() const {
        if (kind == Method::HL) return "exact";
        if (kind == Method::HLApprox) return "approx";
        return "-";
    }

    static MethodSpec parse(const std::string& token) {
        MethodSpec m;
        if (token == "hl") m.kind = Method::HL;
        else if (token == "hl-approx") m.kind = Method::HLApprox;
        else if (token == "dc") m.kind = Method::DC;
        else if (token == "kc") m.kind = Method::KC;
        else if (token == "bc") m.kind = Method::BC;
        else if (token == "cc") m.kind = Method::CC;
        else if (token == "ci") m.kind = Method::CI;
        else if (token == "hda") m.kind = Method::HDA;
        else if (token == "pr") m.kind = Method::PR;
        else if (token == "ec") m.kind = Method::EC;
        else throw std::invalid_argument("unknown method '" + token + "'");
        return m;
    }
};

// Record of a deletion run. break_core stops at the transition point, so the
// deleted list has exactly `transition` entries; the residual is core-free at
// that step and not before.
struct DeletionTrace {
    std::vector<int> deleted;
    std::vector<int> present_count;  // after each deletion
    int transition = 0;
    MethodSpec method;
    double wall_ms = 0.0;
};

// Present-node mask n_j after the first `step` deletions of a trace.
// Successive masks differ by exactly one node flipping to deleted.
inline std::vector<std::uint8_t> present_mask_at(const Graph& g, const DeletionTrace& trace,
                                                 int step) {
    if (step < 0 || step > static_cast<int>(trace.deleted.size()))
        throw std::invalid_argument("present_mask_at: step out of range");
    std::vector<std::uint8_t> present(g.node_count, 1);
    for (int i = 0; i < step; ++i) present[trace.deleted[i]] = 0;
    return present;
}

// Fast patch of the core flags when `victim` is about to be deleted: any
// present neighbor j of degree exactly 2 is about to become a leaf, so c_j
// and c_k (j's other neighbor) are cleared; then the victim is removed and
// degrees updated. No peel is performed, so cascades past k are missed.
// The literal-pseudocode mode instead sets c_j=0, c_victim=1, c_k=1.
inline void approx_state_update(const Graph& g, NodeState& st, int victim,
                                bool literal_pseudocode = false) {
    if (!st.present[victim]) throw std::invalid_argument("approx_state_update: victim already deleted");
    for (int j : g.adj[victim]) {
        if (!st.present[j] || st.degree[j] != 2) continue;
        int k = -1;
        for (int nb : g.adj[j]) {
            if (nb != victim && st.present[nb]) {
                k = nb;
                break;
            }
        }
        if (k < 0) continue;  // cannot happen in a simple graph
        if (literal_pseudocode) {
            st.core[j] = 0;
            st.core[victim] = 1;
            st.core[k] = 1;
        } else {
            st.core[j] = 0;
            st.core[k] = 0;
        }
    }
    st.present[victim] = 0;
    for (int nb : g.adj[victim])
        if (st.present[nb]) --st.degree[nb];
    st.degree[victim] = 0;
}

namespace detail {

// Shared stepping machinery: break_core drives it until the residual is
// core-free; the proposition harness keeps stepping past that point.
class BreakDriver {
public:
    BreakDriver(const Graph& g, const MethodSpec& spec) : g_(g), spec_(spec) {
        st_.present.assign(g.node_count, 1);
        st_.degree = present_degrees(g_, st_.present);
        st_.core.assign(g.node_count, 0);
        if (spec_.kind == Method::HLApprox) st_.core = peel(g_, st_.present).core;
        if (!spec_.adaptive()) static_order_ = static_ranking();
        if (spec_.kind == Method::CI) {
            ci_dist_.assign(g.node_count, -1);
            ci_values_.assign(g.node_count, 0);
            for (int v = 0; v < g.node_count; ++v)
                if (st_.present[v]) ci_values_[v] = ci_value(v);
        }
    }

    const NodeState& state() const { return st_; }

    // Re-applies the first `steps` deletions of a recorded trace, advancing
    // the method state (approximate core patches, CI rescoring, static-rank
    // consumption) exactly as the original run did.
    void replay(const DeletionTrace& trace, int steps) {
        for (int i = 0; i < steps; ++i) {
            int v = trace.deleted[i];
            if (v < 0 || v >= g_.node_count || !st_.present[v])
                throw std::invalid_argument("replay: trace invalid for graph");
            remove(v);
        }
    }

    bool core_free() {
        last_peel_ = peel(g_, st_.present);
        for (int v = 0; v < g_.node_count; ++v)
            if (st_.present[v] && last_peel_.core[v]) return false;
        return true;
    }

    // Deletes one node chosen by the method; returns its id, or -1 when no
    // node is left. Assumes core_free() was called for this step when the
    // method is HL (it reuses that peel for the exact scores).
    int step() {
        int victim = -1;
        switch (spec_.kind) {
            case Method::HL: {
                st_.core = last_peel_.core;
                victim = argmax_score(core_influence(g_, st_, spec_.l_order));
                break;
            }
            case Method::HLApprox: {
                victim = argmax_score(core_influence(g_, st_, spec_.l_order));
                break;
            }
            case Method::HDA: {
                int best = -1;
                for (int v = 0; v < g_.node_count; ++v) {
                    if (!st_.present[v]) continue;
                    if (best < 0 || st_.degree[v] > st_.degree[best]) best = v;
                }
                victim = best;
                break;
            }
            case Method::CI: {
                long long best_val = std::numeric_limits<long long>::min();
                for (int v = 0; v < g_.node_count; ++v) {
                    if (!st_.present[v]) continue;
                    if (victim < 0 || ci_values_[v] > best_val) {
                        victim = v;
                        best_val = ci_values_[v];
                    }
                }
                break;
            }
            default: {  // static ranking consumed in order, skipping deleted nodes
                while (static_pos_ < static_order_.size() &&
                       !st_.present[static_order_[static_pos_]])
                    ++static_pos_;
                if (static_pos_ < static_order_.size()) victim = static_order_[static_pos_++];
                break;
            }
        }
        if (victim < 0) return -1;
        remove(victim);
        return victim;
    }

private:
    int argmax_score(const std::vector<double>& score) const {
        int best = -1;
        for (int v = 0; v < g_.node_count; ++v) {
            if (!st_.present[v]) continue;
            if (best < 0 || score[v] > score[best]) best = v;
        }
        return best;
    }

    long long ci_value(int v) {
        return collective_influence_value(g_, st_.present, st_.degree, v, spec_.ci_radius,
                                          ci_dist_);
    }

    void remove(int victim) {
        std::vector<int> affected;
        if (spec_.kind == Method::CI) {
            // CI scores change only within radius+1 of the victim
            affected.push_back(victim);
            std::size_t head = 0;
            std::vector<int> depth(1, 0);
            ci_dist_[victim] = 0;
            while (head < affected.size()) {
                int v = affected[head];
                int d = depth[head];
                ++head;
                if (d == spec_.ci_radius + 1) continue;
                for (int w : g_.adj[v]) {
                    if (!st_.present[w] || ci_dist_[w] >= 0) continue;
                    ci_dist_[w] = d + 1;
                    affected.push_back(w);
                    depth.push_back(d + 1);
                }
            }
            for (int v : affected) ci_dist_[v] = -1;
        }
        if (spec_.kind == Method::HLApprox) {
            approx_state_update(g_, st_, victim, spec_.approx_literal_pseudocode);
        } else {
            st_.present[victim] = 0;
            for (int nb : g_.adj[victim])
                if (st_.present[nb]) --st_.degree[nb];
            st_.degree[victim] = 0;
        }
        if (spec_.kind == Method::CI) {
            for (int v : affected)
                if (st_.present[v]) ci_values_[v] = ci_value(v);
        }
    }

    std::vector<int> static_ranking() const {
        switch (spec_.kind) {
            case Method::DC: {
                std::vector<int> deg(g_.node_count);
                for (int v = 0; v < g_.node_count; ++v) deg[v] = g_.degree(v);
                return ranked_by_score(deg);
            }
            case Method::KC: return ranked_by_score(k_core_indices(g_));
            case Method::BC: return ranked_by_score(betweenness_centrality(g_));
            case Method::CC: return ranked_by_score(closeness_centrality(g_));
            case Method::PR:
                return ranked_by_score(pagerank(g_, spec_.pr_damping, spec_.tol));
            case Method::EC: return ranked_by_score(eigenvector_centrality(g_, spec_.tol));
            default: throw std::logic_error("static_ranking: adaptive method");
        }
    }

    const Graph& g_;
    MethodSpec spec_;
    NodeState st_;
    PeelResult last_peel_;
    std::vector<int> static_order_;
    std::size_t static_pos_ = 0;
    std::vector<long long> ci_values_;
    std::vector<int> ci_dist_;
};

} // namespace detail

// One-shot static ranking for the centrality baselines (degree, k-core,
// betweenness, closeness, PageRank, eigenvector). Ties break to lowest id.
inline std::vector<int> rank_static(const Graph& g, const MethodSpec& spec) {
    switch (spec.kind) {
        case Method::DC: {
            std::vector<int> deg(g.node_count);
            for (int v = 0; v < g.node_count; ++v) deg[v] = g.degree(v);
            return ranked_by_score(deg);
        }
        case Method::KC: return ranked_by_score(k_core_indices(g));
        case Method::BC: return ranked_by_score(betweenness_centrality(g));
        case Method::CC: return ranked_by_score(closeness_centrality(g));
        case Method::PR: return ranked_by_score(pagerank(g, spec.pr_damping, spec.tol));
        case Method::EC: return ranked_by_score(eigenvector_centrality(g, spec.tol));
        default: throw std::invalid_argument("rank_static: method is adaptive");
    }
}

// One adaptive selection on the present induced graph (no deletion applied).
inline int rank_adaptive_step(const Graph& g, const NodeState& st, const MethodSpec& spec) {
    if (spec.kind == Method::HDA) {
        int best = -1;
        for (int v = 0; v < g.node_count; ++v) {
            if (!st.present[v]) continue;
            if (best < 0 || st.degree[v] > st.degree[best]) best = v;
        }
        return best;
    }
    if (spec.kind == Method::CI) {
        std::vector<int> dist(g.node_count, -1);
        int best = -1;
        long long best_val = 0;
        for (int v = 0; v < g.node_count; ++v) {
            if (!st.present[v]) continue;
            long long val =
                collective_influence_value(g, st.present, st.degree, v, spec.ci_radius, dist);
            if (best < 0 || val > best_val) {
                best = v;
                best_val = val;
            }
        }
        return best;
    }
    throw std::invalid_argument("rank_adaptive_step: expects hda or ci");
}

// Greedy deletion until the residual graph is core-free. The loop guard is an
// exact peel every step for every method; only the HL-approx scoring state is
// approximate. A core-free input yields an empty trace with transition 0.
inline DeletionTrace break_core(const Graph& g, const MethodSpec& spec) {
    auto start = std::chrono::steady_clock::now();
    DeletionTrace trace;
    trace.method = spec;
    detail::BreakDriver driver(g, spec);
    while (!driver.core_free()) {
        int victim = driver.step();
        if (victim < 0) break;
        trace.deleted.push_back(victim);
        trace.present_count.push_back(g.node_count - static_cast<int>(trace.deleted.size()));
    }
    trace.transition = static_cast<int>(trace.deleted.size());
    trace.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    return trace;
}

} // namespace corecover
