#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "corecover/common.hpp"

namespace corecover {

// Immutable simple undirected graph on dense node ids 0..N-1. `labels` keeps
// the external id of each node (identity for generated graphs) so that loaded
// files round-trip with their original numbering.
struct Graph {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;  // canonical u < v, sorted
    std::vector<std::vector<int>> adj;       // sorted neighbor lists
    std::vector<long long> labels;           // external id per node

    int edge_count() const { return static_cast<int>(edges.size()); }
    int degree(int v) const { return static_cast<int>(adj[v].size()); }

    bool has_edge(int u, int v) const {
        const auto& a = adj[u];
        return std::binary_search(a.begin(), a.end(), v);
    }

    static Graph build(int n, std::vector<std::pair<int, int>> edge_list,
                       std::vector<long long> node_labels = {}) {
        Graph g;
        g.node_count = n;
        for (auto& [u, v] : edge_list) {
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw std::invalid_argument("edge endpoint out of range");
            if (u == v) throw std::invalid_argument("self-loop in edge list");
            if (u > v) std::swap(u, v);
        }
        std::sort(edge_list.begin(), edge_list.end());
        edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
        g.edges = std::move(edge_list);
        g.adj.assign(n, {});
        for (auto [u, v] : g.edges) {
            g.adj[u].push_back(v);
            g.adj[v].push_back(u);
        }
        for (auto& a : g.adj) std::sort(a.begin(), a.end());
        if (node_labels.empty()) {
            g.labels.resize(n);
            std::iota(g.labels.begin(), g.labels.end(), 0LL);
        } else {
            if (static_cast<int>(node_labels.size()) != n)
                throw std::invalid_argument("label vector size mismatch");
            g.labels = std::move(node_labels);
        }
        return g;
    }
};

struct LoadStats {
    long long dropped_self_loops = 0;
    long long dropped_duplicates = 0;
};

// Reads a SNAP-style edge list: '#' lines are comments, data lines hold two
// whitespace-separated nonnegative integers. External ids are remapped to
// dense 0..N-1 in ascending label order; self-loops and duplicate edges
// (including the reversed copies SNAP files carry) are dropped and counted.
inline Graph load_edge_list(std::istream& in, LoadStats* stats = nullptr) {
    std::vector<std::pair<long long, long long>> raw;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') continue;
        std::istringstream iss(line.substr(pos));
        long long a = 0, b = 0;
        if (!(iss >> a >> b))
            throw ParseError("expected two integer tokens", line_no);
        std::string extra;
        if (iss >> extra)
            throw ParseError("unexpected trailing token '" + extra + "'", line_no);
        if (a < 0 || b < 0)
            throw ParseError("negative node id", line_no);
        raw.emplace_back(a, b);
    }
    if (raw.empty()) throw ParseError("input contains no edge data", line_no);

    std::vector<long long> label_list;
    label_list.reserve(raw.size() * 2);
    for (auto [a, b] : raw) {
        label_list.push_back(a);
        label_list.push_back(b);
    }
    std::sort(label_list.begin(), label_list.end());
    label_list.erase(std::unique(label_list.begin(), label_list.end()), label_list.end());
    std::unordered_map<long long, int> to_dense;
    to_dense.reserve(label_list.size());
    for (int i = 0; i < static_cast<int>(label_list.size()); ++i) to_dense[label_list[i]] = i;

    std::set<std::pair<int, int>> seen;
    std::vector<std::pair<int, int>> edge_list;
    LoadStats local;
    for (auto [a, b] : raw) {
        if (a == b) {
            ++local.dropped_self_loops;
            continue;
        }
        int u = to_dense[a], v = to_dense[b];
        if (u > v) std::swap(u, v);
        if (!seen.insert({u, v}).second) {
            ++local.dropped_duplicates;
            continue;
        }
        edge_list.emplace_back(u, v);
    }
    if (stats) *stats = local;
    int n = static_cast<int>(label_list.size());
    return Graph::build(n, std::move(edge_list), std::move(label_list));
}

// Same format back out: '#' header lines (node/edge counts plus any caller
// metadata such as generator parameters and seed), then one edge per line
// using external labels.
inline void save_edge_list(const Graph& g, std::ostream& out,
                           const std::vector<std::string>& meta = {}) {
    out << "# nodes " << g.node_count << " edges " << g.edge_count() << "\n";
    for (const auto& m : meta) out << "# " << m << "\n";
    for (auto [u, v] : g.edges) out << g.labels[u] << ' ' << g.labels[v] << "\n";
}

// Uniform G(N, M) with M = round(n * avg_degree / 2): every trial carries its
// nominal mean degree exactly. Distinct edges are drawn without replacement.
inline Graph generate_er(int n, double avg_degree, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_er: need at least 2 nodes");
    if (!(avg_degree > 0.0)) throw std::invalid_argument("generate_er: avg_degree must be positive");
    long long m_target = std::llround(static_cast<double>(n) * avg_degree / 2.0);
    long long capacity = static_cast<long long>(n) * (n - 1) / 2;
    if (m_target > capacity)
        throw std::invalid_argument("generate_er: requested edges exceed complete graph");
    Rng rng(seed);
    std::unordered_set<std::uint64_t> keys;
    keys.reserve(static_cast<std::size_t>(m_target) * 2);
    std::vector<std::pair<int, int>> edge_list;
    edge_list.reserve(static_cast<std::size_t>(m_target));
    while (static_cast<long long>(edge_list.size()) < m_target) {
        int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        std::uint64_t key = static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + v;
        if (keys.insert(key).second) edge_list.emplace_back(u, v);
    }
    return Graph::build(n, std::move(edge_list));
}

// Preferential attachment with gamma ~= 3. Each arriving node attaches to
// floor(avg_degree/2) or ceil(avg_degree/2) distinct targets, mixed so the
// expected attachment count is avg_degree/2; the seed graph is a small clique
// so target degrees are never zero.
inline Graph generate_sf(int n, double avg_degree, std::uint64_t seed) {
    if (n < 4) throw std::invalid_argument("generate_sf: need at least 4 nodes");
    if (avg_degree < 2.0) throw std::invalid_argument("generate_sf: avg_degree must be >= 2");
    int m_lo = static_cast<int>(std::floor(avg_degree / 2.0));
    int m_hi = static_cast<int>(std::ceil(avg_degree / 2.0));
    double p_hi = avg_degree / 2.0 - m_lo;
    int m0 = m_hi + 1;
    if (m0 >= n) throw std::invalid_argument("generate_sf: avg_degree too large for node count");

    Rng rng(seed);
    std::vector<std::pair<int, int>> edge_list;
    std::vector<int> endpoints;  // one entry per edge endpoint: degree-proportional sampling
    for (int i = 0; i < m0; ++i) {
        for (int j = i + 1; j < m0; ++j) {
            edge_list.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }
    std::vector<int> targets;
    for (int t = m0; t < n; ++t) {
        int m_t = m_lo + ((p_hi > 0.0 && rng.unit() < p_hi) ? 1 : 0);
        if (m_t > t) m_t = t;
        if (m_t < 1) m_t = 1;
        targets.clear();
        std::unordered_set<int> chosen;
        while (static_cast<int>(targets.size()) < m_t) {
            int pick = endpoints[rng.below(endpoints.size())];
            if (chosen.insert(pick).second) targets.push_back(pick);
        }
        for (int tg : targets) {
            edge_list.emplace_back(tg, t);
            endpoints.push_back(tg);
            endpoints.push_back(t);
        }
    }
    return Graph::build(n, std::move(edge_list));
}

struct Induced {
    Graph graph;
    std::vector<int> to_parent;  // new id -> old id
};

// Subgraph induced by the present-node mask, reindexed densely. Labels carry
// over so external ids survive the restriction.
inline Induced induced_subgraph(const Graph& g, std::span<const std::uint8_t> present) {
    if (static_cast<int>(present.size()) != g.node_count)
        throw std::invalid_argument("induced_subgraph: mask length mismatch");
    std::vector<int> to_new(g.node_count, -1);
    Induced out;
    for (int v = 0; v < g.node_count; ++v) {
        if (present[v]) {
            to_new[v] = static_cast<int>(out.to_parent.size());
            out.to_parent.push_back(v);
        }
    }
    std::vector<std::pair<int, int>> edge_list;
    for (auto [u, v] : g.edges)
        if (present[u] && present[v]) edge_list.emplace_back(to_new[u], to_new[v]);
    std::vector<long long> labels;
    labels.reserve(out.to_parent.size());
    for (int old : out.to_parent) labels.push_back(g.labels[old]);
    out.graph = Graph::build(static_cast<int>(out.to_parent.size()), std::move(edge_list),
                             std::move(labels));
    return out;
}

// Per-node run state: n (present), c (core) and the degree restricted to the
// present induced graph. s_i = c_i * n_i; q_i = d_i - 1.
struct NodeState {
    std::vector<std::uint8_t> present;
    std::vector<std::uint8_t> core;
    std::vector<int> degree;

    int s(int i) const { return present[i] && core[i] ? 1 : 0; }
    int q(int i) const { return degree[i] - 1; }
};

inline std::vector<int> present_degrees(const Graph& g, std::span<const std::uint8_t> present) {
    std::vector<int> deg(g.node_count, 0);
    for (auto [u, v] : g.edges) {
        if (present[u] && present[v]) {
            ++deg[u];
            ++deg[v];
        }
    }
    return deg;
}

} // namespace corecover
