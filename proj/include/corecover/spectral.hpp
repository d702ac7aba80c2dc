#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "corecover/graph.hpp"

namespace corecover {

// Index over directed edges of the present induced graph: every undirected
// edge contributes both orientations. Out-edges of a node are contiguous and
// sorted by destination; rev[e] is the opposite orientation of e.
struct DirectedEdgeIndex {
    int m2 = 0;                 // number of directed edges (2M)
    std::vector<int> src, dst;  // per directed edge
    std::vector<int> rev;
    std::vector<int> first;     // CSR offsets: out-edges of u are [first[u], first[u+1])

    static DirectedEdgeIndex build(const Graph& g, std::span<const std::uint8_t> present) {
        DirectedEdgeIndex idx;
        const int n = g.node_count;
        idx.first.assign(n + 1, 0);
        for (int u = 0; u < n; ++u) {
            idx.first[u] = idx.m2;
            if (!present[u]) continue;
            for (int v : g.adj[u]) {
                if (!present[v]) continue;
                idx.src.push_back(u);
                idx.dst.push_back(v);
                ++idx.m2;
            }
        }
        idx.first[n] = idx.m2;
        idx.rev.assign(idx.m2, -1);
        for (int e = 0; e < idx.m2; ++e) {
            int u = idx.src[e], v = idx.dst[e];
            // locate (v -> u) among v's out-edges by binary search on dst
            int lo = idx.first[v], hi = idx.first[v + 1];
            while (lo < hi) {
                int mid = (lo + hi) / 2;
                if (idx.dst[mid] < u)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            idx.rev[e] = lo;
        }
        return idx;
    }

    int id_of(int u, int v) const {
        int lo = first[u], hi = first[u + 1];
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (dst[mid] < v)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }
};

// One application of the modified non-backtracking operator:
// (R x)_{w->x} = s_x * sum_{z in N(x), z != w} x_{x->z}.
// Uses per-node out-sums, so a full application is O(2M).
inline void apply_r(const DirectedEdgeIndex& idx, const NodeState& st,
                    const std::vector<double>& in, std::vector<double>& out,
                    std::vector<double>& node_sum_scratch) {
    const int n = static_cast<int>(idx.first.size()) - 1;
    node_sum_scratch.assign(n, 0.0);
    for (int e = 0; e < idx.m2; ++e) node_sum_scratch[idx.src[e]] += in[e];
    out.resize(idx.m2);
    for (int e = 0; e < idx.m2; ++e) {
        int x = idx.dst[e];
        out[e] = st.s(x) ? (node_sum_scratch[x] - in[idx.rev[e]]) : 0.0;
    }
}

// Explicit dense R: entry (w->x, y->z) = s_y when x == y and w != z, else 0.
// Row-major, m2 x m2. Intended for diagnostics and oracles; larger systems
// should use the sparse power route.
inline std::vector<double> build_r_matrix(const Graph& g, const NodeState& st,
                                          DirectedEdgeIndex* index_out = nullptr) {
    DirectedEdgeIndex idx = DirectedEdgeIndex::build(g, st.present);
    if (idx.m2 > 20000)
        throw std::invalid_argument(
            "build_r_matrix: 2M exceeds dense guard (20000); use lambda_power or "
            "lambda_closed_form instead");
    std::vector<double> r(static_cast<std::size_t>(idx.m2) * idx.m2, 0.0);
    for (int e = 0; e < idx.m2; ++e) {
        int w = idx.src[e], x = idx.dst[e];
        double sx = st.s(x);
        if (sx == 0.0) continue;
        for (int f = idx.first[x]; f < idx.first[x + 1]; ++f) {
            if (idx.dst[f] == w) continue;  // non-backtracking
            r[static_cast<std::size_t>(e) * idx.m2 + f] = sx;
        }
    }
    if (index_out) *index_out = std::move(idx);
    return r;
}

struct SpectralEstimate {
    enum class Family { odd, even };  // walk length 2l-1 vs 2l
    int order = 0;
    Family family = Family::odd;
    double value = 0.0;
};

// Power-method estimate of the largest eigenvalue of R, never materializing
// the matrix. With v_l = R^l 1 and the edge-reversal involution P (for which
// R^T = P R P), the walk sums reduce to twisted inner products:
//   odd  family: lambda_l  = (<P v_l, v_l>   / 2M)^(1/(2l))    (paths of 2l-1 edges)
//   even family: lambda'_l = (<P v_l, R v_l> / 2M)^(1/(2l+1))  (paths of 2l edges)
inline SpectralEstimate lambda_power(const Graph& g, const NodeState& st, int l,
                                     SpectralEstimate::Family family) {
    if (l < 1) throw std::invalid_argument("lambda_power: order must be >= 1");
    SpectralEstimate est{l, family, 0.0};
    DirectedEdgeIndex idx = DirectedEdgeIndex::build(g, st.present);
    if (idx.m2 == 0) return est;
    std::vector<double> v(idx.m2, 1.0), next, scratch;
    for (int k = 0; k < l; ++k) {
        apply_r(idx, st, v, next, scratch);
        v.swap(next);
    }
    double w = 0.0;
    if (family == SpectralEstimate::Family::odd) {
        for (int e = 0; e < idx.m2; ++e) w += v[idx.rev[e]] * v[e];
        est.value = std::pow(w / idx.m2, 1.0 / (2.0 * l));
    } else {
        apply_r(idx, st, v, next, scratch);
        for (int e = 0; e < idx.m2; ++e) w += v[idx.rev[e]] * next[e];
        est.value = std::pow(w / idx.m2, 1.0 / (2.0 * l + 1.0));
    }
    return est;
}

// Closed forms for the first three odd-family orders, summing the weighted
// non-backtracking walks directly (independent of the power route):
//   l=1: (1/2M) sum_{w->x} q_w q_x s_w s_x
//   l=2: walks w->x->y->z with w != y, x != z
//   l=3: walks of five edges, consecutive-backtrack forbidden; revisits allowed.
inline SpectralEstimate lambda_closed_form(const Graph& g, const NodeState& st, int l) {
    if (l < 1 || l > 3)
        throw std::invalid_argument("lambda_closed_form: only orders 1..3 have closed forms");
    SpectralEstimate est{l, SpectralEstimate::Family::odd, 0.0};
    const int n = g.node_count;
    long long m2 = 0;
    for (int u = 0; u < n; ++u) {
        if (!st.present[u]) continue;
        for (int v : g.adj[u])
            if (st.present[v]) ++m2;
    }
    if (m2 == 0) return est;

    auto sq = [&](int i) { return static_cast<double>(st.s(i)) * st.q(i); };
    double total = 0.0;
    if (l == 1) {
        for (int u = 0; u < n; ++u) {
            if (!st.s(u)) continue;
            for (int v : g.adj[u]) {
                if (!st.present[v]) continue;
                total += sq(u) * sq(v);
            }
        }
    } else if (l == 2) {
        // middle edge (x -> y); endpoint sums exclude the node across the edge
        for (int x = 0; x < n; ++x) {
            if (!st.s(x)) continue;
            for (int y : g.adj[x]) {
                if (!st.s(y)) continue;
                double left = 0.0, right = 0.0;
                for (int w : g.adj[x])
                    if (st.present[w] && w != y) left += sq(w);
                for (int z : g.adj[y])
                    if (st.present[z] && z != x) right += sq(z);
                total += left * right;
            }
        }
    } else {
        // T[v] = sum_{u in N(v)} s_u q_u, so the one-exclusion sums are O(1) each
        std::vector<double> t_full(n, 0.0);
        for (int v = 0; v < n; ++v) {
            if (!st.present[v]) continue;
            for (int u : g.adj[v])
                if (st.present[u]) t_full[v] += sq(u);
        }
        for (int w = 0; w < n; ++w) {
            if (!st.s(w)) continue;
            for (int x : g.adj[w]) {
                if (!st.s(x)) continue;
                double left = 0.0, right = 0.0;
                for (int v : g.adj[w]) {
                    if (!st.present[v] || v == x) continue;
                    if (st.s(v)) left += t_full[v] - sq(w);
                }
                for (int y : g.adj[x]) {
                    if (!st.present[y] || y == w) continue;
                    if (st.s(y)) right += t_full[y] - sq(x);
                }
                total += left * right;
            }
        }
    }
    est.value = std::pow(total / static_cast<double>(m2), 1.0 / (2.0 * l));
    return est;
}

// Core Influence H(v_i): q_i times the q-weighted count of non-backtracking
// walks of length l from i whose nodes all carry s = 1. Nodes with s_i = 0
// score 0; q_i is clamped at 0 so stale approximate states cannot produce
// negative scores.
inline std::vector<double> core_influence(const Graph& g, const NodeState& st, int l = 1) {
    if (l < 1) throw std::invalid_argument("core_influence: order must be >= 1");
    const int n = g.node_count;
    std::vector<double> h(n, 0.0);
    if (l == 1) {
        for (int i = 0; i < n; ++i) {
            if (!st.s(i)) continue;
            double acc = 0.0;
            for (int j : g.adj[i]) {
                if (!st.present[j] || !st.s(j)) continue;
                acc += static_cast<double>(st.q(j));
            }
            double qi = std::max(st.q(i), 0);
            h[i] = qi * acc;
        }
        return h;
    }
    DirectedEdgeIndex idx = DirectedEdgeIndex::build(g, st.present);
    std::vector<double> a(idx.m2), b(idx.m2);
    for (int i = 0; i < n; ++i) {
        if (!st.s(i)) continue;
        std::fill(a.begin(), a.end(), 0.0);
        for (int f = idx.first[i]; f < idx.first[i + 1]; ++f) a[f] = st.s(idx.dst[f]);
        for (int step = 2; step <= l; ++step) {
            std::fill(b.begin(), b.end(), 0.0);
            for (int e = 0; e < idx.m2; ++e) {
                if (a[e] == 0.0) continue;
                int x = idx.src[e], y = idx.dst[e];
                for (int f = idx.first[y]; f < idx.first[y + 1]; ++f) {
                    int z = idx.dst[f];
                    if (z == x) continue;
                    if (!st.s(z)) continue;
                    b[f] += a[e];
                }
            }
            a.swap(b);
        }
        double acc = 0.0;
        for (int e = 0; e < idx.m2; ++e) {
            if (a[e] == 0.0) continue;
            acc += a[e] * st.q(idx.dst[e]);
        }
        h[i] = std::max(st.q(i), 0) * acc;
    }
    return h;
}

} // namespace corecover
