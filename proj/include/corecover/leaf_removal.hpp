#pragma once

#include <queue>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "corecover/graph.hpp"

namespace corecover {

// Outcome of exhaustive leaf removal on an induced subgraph. A leaf is a
// degree-one node together with its unique neighbor; removing it deletes both
// nodes and their incident edges. What survives with degree >= 2 is the core;
// degree-0 survivors are isolated. peel pairs, core nodes and isolated
// survivors partition the present nodes.
struct PeelResult {
    std::vector<std::uint8_t> core;             // c_i = 1 iff i survives with degree >= 2
    std::vector<std::pair<int, int>> pairs;     // (leaf, matched neighbor) in removal order
    std::vector<int> isolated;                  // present survivors with degree 0
};

// Deterministic peel: FIFO queue seeded in ascending node id; a leaf's unique
// neighbor is found by ascending adjacency scan. The core is independent of
// this order (confluence), only the pair list depends on it.
inline PeelResult peel(const Graph& g, std::span<const std::uint8_t> present) {
    if (static_cast<int>(present.size()) != g.node_count)
        throw std::invalid_argument("peel: mask length mismatch");
    const int n = g.node_count;
    std::vector<std::uint8_t> alive(present.begin(), present.end());
    std::vector<int> deg = present_degrees(g, present);

    std::queue<int> leaves;
    for (int v = 0; v < n; ++v)
        if (alive[v] && deg[v] == 1) leaves.push(v);

    PeelResult out;
    out.core.assign(n, 0);
    auto remove_node = [&](int v) {
        alive[v] = 0;
        for (int nb : g.adj[v]) {
            if (alive[nb]) {
                if (--deg[nb] == 1) leaves.push(nb);
            }
        }
        deg[v] = 0;
    };
    while (!leaves.empty()) {
        int u = leaves.front();
        leaves.pop();
        if (!alive[u] || deg[u] != 1) continue;  // stale entry
        int w = -1;
        for (int nb : g.adj[u]) {
            if (alive[nb]) {
                w = nb;
                break;
            }
        }
        out.pairs.emplace_back(u, w);
        remove_node(u);
        remove_node(w);
    }
    for (int v = 0; v < n; ++v) {
        if (alive[v]) {
            if (deg[v] >= 2)
                out.core[v] = 1;
            else
                out.isolated.push_back(v);
        }
    }
    return out;
}

inline bool is_core_free(const Graph& g, std::span<const std::uint8_t> present) {
    PeelResult pr = peel(g, present);
    for (std::uint8_t c : pr.core)
        if (c) return false;
    return true;
}

// On a core-free induced graph the peel pairs form a maximum matching (the
// matched-neighbor endpoints are simultaneously a minimum vertex cover, so
// the matching meets the cover bound). Calling this with a nonempty core is a
// contract violation.
inline std::vector<std::pair<int, int>> leaf_pairing_matching(
    const Graph& g, std::span<const std::uint8_t> present) {
    PeelResult pr = peel(g, present);
    for (std::uint8_t c : pr.core)
        if (c) throw std::invalid_argument("leaf_pairing_matching: graph has a nonempty core");
    return std::move(pr.pairs);
}

// Exact per-node state for the induced graph: present flags, core flags from
// a fresh peel, and present-restricted degrees.
inline NodeState exact_state(const Graph& g, std::span<const std::uint8_t> present) {
    NodeState st;
    st.present.assign(present.begin(), present.end());
    st.degree = present_degrees(g, present);
    st.core = peel(g, present).core;
    return st;
}

} // namespace corecover
