#include <cmath>

#include "doctest.h"

#include "corecover/leaf_removal.hpp"
#include "corecover/spectral.hpp"
#include "oracles.hpp"

using namespace corecover;

namespace {

NodeState all_core_state(const Graph& g) {
    NodeState st;
    st.present.assign(g.node_count, 1);
    st.core.assign(g.node_count, 1);
    st.degree = present_degrees(g, st.present);
    return st;
}

NodeState peeled_state(const Graph& g) {
    return exact_state(g, std::vector<std::uint8_t>(g.node_count, 1));
}

// Dense route for the same walk quantity: sum of entries of R^k * 1,
// normalized and rooted per family.
double dense_lambda(const std::vector<double>& r, int m2, int l,
                    SpectralEstimate::Family family) {
    std::vector<double> v(m2, 1.0);
    int k = family == SpectralEstimate::Family::odd ? 2 * l : 2 * l + 1;
    for (int i = 0; i < k; ++i) v = oracles::dense_apply(r, v);
    double w = 0.0;
    for (double x : v) w += x;
    double expo = family == SpectralEstimate::Family::odd ? 1.0 / (2.0 * l) : 1.0 / (2.0 * l + 1.0);
    return std::pow(w / m2, expo);
}

} // namespace

TEST_CASE("directed edge index carries both orientations with a reversal involution") {
    Graph tri = oracles::cycle_graph(3);
    DirectedEdgeIndex idx = DirectedEdgeIndex::build(tri, std::vector<std::uint8_t>(3, 1));
    CHECK(idx.m2 == 6);
    for (int e = 0; e < idx.m2; ++e) {
        CHECK(idx.rev[e] != e);
        CHECK(idx.rev[idx.rev[e]] == e);
        CHECK(idx.src[idx.rev[e]] == idx.dst[e]);
        CHECK(idx.dst[idx.rev[e]] == idx.src[e]);
    }
}

TEST_CASE("explicit R on a triangle has unit row sums") {
    Graph tri = oracles::cycle_graph(3);
    NodeState st = all_core_state(tri);
    std::vector<double> r = build_r_matrix(tri, st);
    int m2 = 6;
    for (int e = 0; e < m2; ++e) {
        double row = 0.0;
        for (int f = 0; f < m2; ++f) row += r[static_cast<std::size_t>(e) * m2 + f];
        CHECK(row == doctest::Approx(1.0));
    }
}

TEST_CASE("explicit R on a path has small spectral radius and zero state kills it") {
    Graph p3 = oracles::path_graph(3);
    NodeState st = all_core_state(p3);
    DirectedEdgeIndex idx;
    std::vector<double> r = build_r_matrix(p3, st, &idx);
    CHECK(idx.m2 == 4);
    // R is nilpotent here; the shifted power oracle approaches 0 polynomially
    CHECK(oracles::dense_spectral_radius(r, idx.m2) < 1e-3);

    NodeState dead = st;
    std::fill(dead.core.begin(), dead.core.end(), 0);
    std::vector<double> zero = build_r_matrix(p3, dead);
    for (double x : zero) CHECK(x == 0.0);
}

TEST_CASE("dense guard rejects oversized systems") {
    Graph g = generate_er(2000, 11.0, 1);  // 2M = 22000
    NodeState st = all_core_state(g);
    CHECK_THROWS_AS(build_r_matrix(g, st), std::invalid_argument);
}

TEST_CASE("closed-form order 1 on reference graphs") {
    Graph c8 = oracles::cycle_graph(8);
    CHECK(lambda_closed_form(c8, all_core_state(c8), 1).value == doctest::Approx(1.0));

    Graph k4 = oracles::complete_graph(4);
    CHECK(lambda_closed_form(k4, all_core_state(k4), 1).value == doctest::Approx(2.0));

    Graph p3 = oracles::path_graph(3);
    CHECK(lambda_closed_form(p3, all_core_state(p3), 1).value == doctest::Approx(0.0));
}

TEST_CASE("power order 1 equals the closed form") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Graph g = oracles::random_graph(25, 50, seed);
        NodeState st = peeled_state(g);
        double closed = lambda_closed_form(g, st, 1).value;
        double power = lambda_power(g, st, 1, SpectralEstimate::Family::odd).value;
        CHECK(power == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("closed forms match the explicit-matrix walk sums") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Graph g = oracles::random_graph(20, 40, seed * 13);
        NodeState st = peeled_state(g);
        DirectedEdgeIndex idx;
        std::vector<double> r = build_r_matrix(g, st, &idx);
        if (idx.m2 == 0) continue;
        for (int l : {2, 3}) {
            double dense = dense_lambda(r, idx.m2, l, SpectralEstimate::Family::odd);
            double closed = lambda_closed_form(g, st, l).value;
            CHECK(closed == doctest::Approx(dense).epsilon(1e-12));
        }
    }
}

TEST_CASE("sparse power matches the explicit matrix for both families") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Graph g = oracles::random_graph(30, 60, seed * 7 + 1);
        NodeState st = peeled_state(g);
        DirectedEdgeIndex idx;
        std::vector<double> r = build_r_matrix(g, st, &idx);
        if (idx.m2 == 0) continue;
        for (int l = 1; l <= 4; ++l) {
            for (auto fam : {SpectralEstimate::Family::odd, SpectralEstimate::Family::even}) {
                double sparse = lambda_power(g, st, l, fam).value;
                double dense = dense_lambda(r, idx.m2, l, fam);
                CHECK(std::abs(sparse - dense) < 1e-10);
            }
        }
    }
}

TEST_CASE("triangle estimates are exactly one at every order") {
    Graph tri = oracles::cycle_graph(3);
    NodeState st = all_core_state(tri);
    for (int l = 1; l <= 6; ++l) {
        CHECK(lambda_power(tri, st, l, SpectralEstimate::Family::odd).value ==
              doctest::Approx(1.0));
        CHECK(lambda_power(tri, st, l, SpectralEstimate::Family::even).value ==
              doctest::Approx(1.0));
    }
}

TEST_CASE("lambda sequence approaches the dense spectral radius") {
    Graph g = oracles::random_graph(50, 125, 2024);
    NodeState st = peeled_state(g);
    DirectedEdgeIndex idx;
    std::vector<double> r = build_r_matrix(g, st, &idx);
    double radius = oracles::dense_spectral_radius(r, idx.m2);
    std::vector<double> err;
    for (int l = 1; l <= 8; ++l)
        err.push_back(std::abs(lambda_power(g, st, l, SpectralEstimate::Family::odd).value -
                               radius));
    bool improving = false;
    for (std::size_t i = 0; i + 2 < err.size(); ++i)
        if (err[i] > err[i + 1] && err[i + 1] > err[i + 2]) improving = true;
    CHECK(improving);
    CHECK(err.back() < err.front());
}

TEST_CASE("M = 0 gives lambda 0") {
    Graph empty = Graph::build(4, {});
    NodeState st = all_core_state(empty);
    CHECK(lambda_power(empty, st, 2, SpectralEstimate::Family::odd).value == 0.0);
    CHECK(lambda_closed_form(empty, st, 1).value == 0.0);
}

TEST_CASE("core influence on regular structures") {
    Graph k4 = oracles::complete_graph(4);  // 3-regular, q = 2 everywhere
    auto h = core_influence(k4, all_core_state(k4), 1);
    for (double x : h) CHECK(x == doctest::Approx(12.0));
}

TEST_CASE("deleted or peeled nodes score zero") {
    Graph g = oracles::nine_node_demo();
    NodeState st = peeled_state(g);
    auto h = core_influence(g, st, 1);
    CHECK(h[0] == 0.0);  // s = 0 off the core
    CHECK(h[6] > 0.0);

    st.present[6] = 0;
    st.degree = present_degrees(g, st.present);
    auto h2 = core_influence(g, st, 1);
    CHECK(h2[6] == 0.0);
}

TEST_CASE("core influence equals the direct neighbor-sum formula") {
    Graph g = oracles::random_graph(30, 60, 777);
    NodeState st = peeled_state(g);
    auto h = core_influence(g, st, 1);
    for (int i = 0; i < g.node_count; ++i) {
        double expect = 0.0;
        if (st.s(i)) {
            double acc = 0.0;
            for (int j : g.adj[i])
                if (st.s(j)) acc += st.q(j);
            expect = std::max(st.q(i), 0) * acc;
        }
        CHECK(h[i] == doctest::Approx(expect));
    }
}

TEST_CASE("summed core influence ties to the walk sums at every length") {
    for (std::uint64_t seed = 11; seed <= 14; ++seed) {
        Graph g = oracles::random_graph(24, 48, seed);
        NodeState st = peeled_state(g);
        DirectedEdgeIndex idx = DirectedEdgeIndex::build(g, st.present);
        if (idx.m2 == 0) continue;
        for (int len = 1; len <= 4; ++len) {
            auto h = core_influence(g, st, len);
            double total = 0.0;
            for (double x : h) total += x;
            // walk sum of length len equals sum of entries of R^(len+1) * 1
            std::vector<double> v(idx.m2, 1.0), next, scratch;
            for (int k = 0; k <= len; ++k) {
                apply_r(idx, st, v, next, scratch);
                v.swap(next);
            }
            double w = 0.0;
            for (double x : v) w += x;
            CHECK(total == doctest::Approx(w).epsilon(1e-12));
        }
    }
}

TEST_CASE("zeroing a state never increases lambda or any score") {
    for (std::uint64_t seed = 3; seed <= 8; ++seed) {
        Graph g = oracles::random_graph(26, 52, seed * 3);
        NodeState st = peeled_state(g);
        double lam = lambda_closed_form(g, st, 1).value;
        auto h = core_influence(g, st, 1);
        for (int v = 0; v < g.node_count; ++v) {
            if (!st.s(v)) continue;
            NodeState st2 = st;
            st2.core[v] = 0;
            CHECK(lambda_closed_form(g, st2, 1).value <= lam + 1e-12);
            auto h2 = core_influence(g, st2, 1);
            for (int i = 0; i < g.node_count; ++i) CHECK(h2[i] <= h[i] + 1e-12);
        }
    }
}

TEST_CASE("dominant eigenvalue of a connected all-core R is real and nonnegative") {
    Graph g = oracles::cycle_graph(7);
    // chords keep it connected with richer structure
    Graph chords = Graph::build(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 0},
                                    {0, 3}, {1, 4}});
    for (const Graph& gr : {g, chords}) {
        NodeState st = all_core_state(gr);
        DirectedEdgeIndex idx;
        std::vector<double> r = build_r_matrix(gr, st, &idx);
        double radius = oracles::dense_spectral_radius(r, idx.m2);
        CHECK(radius >= 0.0);
        // iterate until the Perron residual itself is small
        std::vector<double> v(idx.m2, 1.0);
        double rayleigh = 0.0;
        for (int it = 0; it < 500000; ++it) {
            std::vector<double> w = oracles::dense_apply(r, v);
            for (int i = 0; i < idx.m2; ++i) w[i] += v[i];
            double norm = 0.0;
            for (double x : w) norm += x * x;
            norm = std::sqrt(norm);
            for (double& x : w) x /= norm;
            v.swap(w);
            std::vector<double> rv = oracles::dense_apply(r, v);
            double num = 0.0, den = 0.0;
            for (int i = 0; i < idx.m2; ++i) {
                num += v[i] * rv[i];
                den += v[i] * v[i];
            }
            rayleigh = num / den;
            double resid = 0.0;
            for (int i = 0; i < idx.m2; ++i)
                resid = std::max(resid, std::abs(rv[i] - rayleigh * v[i]));
            if (resid < 1e-9) break;
        }
        CHECK(rayleigh == doctest::Approx(radius).epsilon(1e-6));
        CHECK(rayleigh >= 0.0);
        for (int i = 0; i < idx.m2; ++i) CHECK(v[i] >= -1e-9);
    }
}
