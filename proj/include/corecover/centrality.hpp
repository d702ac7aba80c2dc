#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <span>
#include <stack>
#include <stdexcept>
#include <vector>

#include "corecover/graph.hpp"

namespace corecover {

// Nodes ordered by score descending, ties by lowest id.
template <typename Score>
std::vector<int> ranked_by_score(const std::vector<Score>& score) {
    std::vector<int> order(score.size());
    for (int i = 0; i < static_cast<int>(order.size()); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
    });
    return order;
}

// Standard k-core index by min-degree bucket peeling.
inline std::vector<int> k_core_indices(const Graph& g) {
    const int n = g.node_count;
    std::vector<int> deg(n), core(n, 0);
    int max_deg = 0;
    for (int v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        max_deg = std::max(max_deg, deg[v]);
    }
    std::vector<std::vector<int>> bins(max_deg + 1);
    for (int v = 0; v < n; ++v) bins[deg[v]].push_back(v);
    std::vector<std::uint8_t> done(n, 0);
    for (int k = 0; k <= max_deg; ++k) {
        auto& bin = bins[k];
        for (std::size_t idx = 0; idx < bin.size(); ++idx) {
            int v = bin[idx];
            if (done[v] || deg[v] > k) continue;
            done[v] = 1;
            core[v] = k;
            for (int u : g.adj[v]) {
                if (!done[u] && deg[u] > k) {
                    --deg[u];
                    if (deg[u] <= k)
                        bin.push_back(u);
                    else
                        bins[deg[u]].push_back(u);
                }
            }
        }
    }
    return core;
}

// Exact betweenness (Brandes 2001), unweighted. Pair contributions are halved
// for the undirected convention.
inline std::vector<double> betweenness_centrality(const Graph& g) {
    const int n = g.node_count;
    std::vector<double> bc(n, 0.0);
    std::vector<int> dist(n), order;
    std::vector<double> sigma(n), delta(n);
    std::vector<std::vector<int>> pred(n);
    order.reserve(n);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : pred) p.clear();
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            order.push_back(v);
            for (int w : g.adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    pred[w].push_back(v);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int w = *it;
            for (int v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    for (double& x : bc) x /= 2.0;
    return bc;
}

// Closeness: classic (N-1)/sum(dist) when the graph is connected, harmonic
// sum(1/dist) otherwise.
inline std::vector<double> closeness_centrality(const Graph& g) {
    const int n = g.node_count;
    std::vector<double> cc(n, 0.0);
    if (n == 0) return cc;
    std::vector<int> dist(n);
    auto bfs = [&](int s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        std::queue<int> q;
        q.push(s);
        int reached = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : g.adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                    ++reached;
                }
            }
        }
        return reached;
    };
    bool connected = (bfs(0) == n);
    for (int s = 0; s < n; ++s) {
        bfs(s);
        if (connected) {
            long long total = 0;
            for (int v = 0; v < n; ++v)
                if (v != s) total += dist[v];
            cc[s] = total > 0 ? static_cast<double>(n - 1) / static_cast<double>(total) : 0.0;
        } else {
            double h = 0.0;
            for (int v = 0; v < n; ++v)
                if (v != s && dist[v] > 0) h += 1.0 / dist[v];
            cc[s] = h;
        }
    }
    return cc;
}

// PageRank with uniform teleport; dangling mass is spread uniformly.
inline std::vector<double> pagerank(const Graph& g, double damping = 0.85,
                                    double tol = 1e-10, int max_iter = 100000) {
    const int n = g.node_count;
    std::vector<double> pr(n, n > 0 ? 1.0 / n : 0.0), next(n);
    if (n == 0) return pr;
    for (int it = 0; it < max_iter; ++it) {
        double dangling = 0.0;
        for (int v = 0; v < n; ++v)
            if (g.degree(v) == 0) dangling += pr[v];
        double base = (1.0 - damping) / n + damping * dangling / n;
        std::fill(next.begin(), next.end(), base);
        for (int v = 0; v < n; ++v) {
            if (g.degree(v) == 0) continue;
            double share = damping * pr[v] / g.degree(v);
            for (int w : g.adj[v]) next[w] += share;
        }
        double diff = 0.0;
        for (int v = 0; v < n; ++v) diff += std::abs(next[v] - pr[v]);
        pr.swap(next);
        if (diff < tol) break;
    }
    return pr;
}

// Eigenvector centrality by power iteration. Iterating on A + I keeps the
// dominant eigenvector of A while removing the period-2 oscillation bipartite
// components would otherwise cause.
inline std::vector<double> eigenvector_centrality(const Graph& g, double tol = 1e-10,
                                                  int max_iter = 100000) {
    const int n = g.node_count;
    std::vector<double> v(n, n > 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : 0.0), next(n);
    if (n == 0) return v;
    for (int it = 0; it < max_iter; ++it) {
        for (int i = 0; i < n; ++i) {
            double acc = v[i];  // the +I term
            for (int j : g.adj[i]) acc += v[j];
            next[i] = acc;
        }
        double norm = 0.0;
        for (double x : next) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return next;
        for (double& x : next) x /= norm;
        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff += std::abs(next[i] - v[i]);
        v.swap(next);
        if (diff < tol) return v;
    }
    throw std::runtime_error(
        "eigenvector_centrality: power iteration failed to converge on graph with " +
        std::to_string(n) + " nodes and " + std::to_string(g.edge_count()) + " edges");
}

// Collective influence at radius r on the present induced graph:
// (d_i - 1) * sum of (d_j - 1) over the ball boundary at exact distance r.
inline long long collective_influence_value(const Graph& g,
                                            std::span<const std::uint8_t> present,
                                            std::span<const int> deg, int i, int radius,
                                            std::vector<int>& dist_scratch) {
    if (deg[i] == 0) return 0;
    std::vector<int>& dist = dist_scratch;
    std::vector<int> touched;
    dist[i] = 0;
    touched.push_back(i);
    std::queue<int> q;
    q.push(i);
    long long boundary_sum = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (dist[v] == radius) {
            boundary_sum += deg[v] - 1;
            continue;
        }
        for (int w : g.adj[v]) {
            if (!present[w] || dist[w] >= 0) continue;
            dist[w] = dist[v] + 1;
            touched.push_back(w);
            q.push(w);
        }
    }
    for (int v : touched) dist[v] = -1;
    return static_cast<long long>(deg[i] - 1) * boundary_sum;
}

} // namespace corecover
