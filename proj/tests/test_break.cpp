#include <set>

#include "doctest.h"

#include "corecover/break.hpp"
#include "corecover/cover.hpp"
#include "oracles.hpp"

using namespace corecover;

TEST_CASE("core-free inputs give an empty trace for every method") {
    Graph tree = oracles::path_graph(8);
    for (const char* name : {"hl", "hl-approx", "dc", "kc", "bc", "cc", "ci", "hda", "pr", "ec"}) {
        DeletionTrace trace = break_core(tree, MethodSpec::parse(name));
        CHECK(trace.transition == 0);
        CHECK(trace.deleted.empty());
    }
}

TEST_CASE("trace soundness: core-free exactly from the transition point") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Graph g = oracles::random_graph(40, 90, seed * 17);
        for (const char* name : {"hl", "hl-approx", "dc", "hda", "ci", "pr"}) {
            DeletionTrace trace = break_core(g, MethodSpec::parse(name));
            CHECK(is_core_free(g, present_mask_at(g, trace, trace.transition)));
            if (trace.transition > 0)
                CHECK_FALSE(is_core_free(g, present_mask_at(g, trace, trace.transition - 1)));
            CHECK(trace.transition == static_cast<int>(trace.deleted.size()));
            // deleted ids are distinct
            std::set<int> uniq(trace.deleted.begin(), trace.deleted.end());
            CHECK(uniq.size() == trace.deleted.size());
        }
    }
}

TEST_CASE("hl picks the freshly rescored maximum at every step") {
    Graph g = oracles::random_graph(40, 80, 515);
    DeletionTrace trace = break_core(g, MethodSpec::parse("hl"));
    std::vector<std::uint8_t> present(g.node_count, 1);
    for (int victim : trace.deleted) {
        NodeState st = exact_state(g, present);
        auto h = core_influence(g, st, 1);
        int best = -1;
        for (int v = 0; v < g.node_count; ++v) {
            if (!present[v]) continue;
            if (best < 0 || h[v] > h[best]) best = v;
        }
        CHECK(victim == best);
        present[victim] = 0;
    }
}

TEST_CASE("deterministic traces for identical inputs") {
    Graph g = oracles::random_graph(60, 150, 4242);
    for (const char* name : {"hl", "hl-approx", "hda", "ci", "ec"}) {
        DeletionTrace a = break_core(g, MethodSpec::parse(name));
        DeletionTrace b = break_core(g, MethodSpec::parse(name));
        CHECK(a.deleted == b.deleted);
    }
}

TEST_CASE("static rankings are consumed in order, skipping deleted nodes") {
    // triangle hanging off a star: degree order is hub, then triangle nodes
    Graph g = Graph::build(7, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {4, 5}, {5, 6}, {6, 4}});
    auto order = rank_static(g, MethodSpec::parse("dc"));
    CHECK(order[0] == 0);
    DeletionTrace trace = break_core(g, MethodSpec::parse("dc"));
    // consuming the ranking must delete exactly its prefix
    std::vector<int> prefix(order.begin(), order.begin() + trace.transition);
    CHECK(trace.deleted == prefix);
}

TEST_CASE("approximate state update patch semantics") {
    // victim 0 with a degree-2 neighbor 1 whose far neighbor is 2
    Graph g = Graph::build(5, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {4, 0}, {2, 3}});
    std::vector<std::uint8_t> present(5, 1);
    NodeState st = exact_state(g, present);

    SUBCASE("text mode clears the would-be leaf and its far neighbor") {
        NodeState s2 = st;
        approx_state_update(g, s2, 0, false);
        CHECK(s2.present[0] == 0);
        CHECK(s2.core[1] == 0);
        CHECK(s2.core[2] == 0);
        CHECK(s2.degree[1] == 1);
        CHECK(s2.degree[3] == 2);
    }
    SUBCASE("literal pseudocode mode re-raises the far neighbor and the victim") {
        NodeState s2 = st;
        approx_state_update(g, s2, 0, true);
        CHECK(s2.core[1] == 0);
        CHECK(s2.core[2] == 1);
        CHECK(s2.core[0] == 1);
        CHECK(s2.present[0] == 0);  // deleted regardless, so s = 0
        CHECK(s2.s(0) == 0);
    }
    SUBCASE("deleting twice is a contract violation") {
        NodeState s2 = st;
        approx_state_update(g, s2, 0, false);
        CHECK_THROWS_AS(approx_state_update(g, s2, 0, false), std::invalid_argument);
    }
}

TEST_CASE("approximate update leaves high-degree neighborhoods untouched") {
    Graph k5 = oracles::complete_graph(5);
    NodeState st = exact_state(k5, std::vector<std::uint8_t>(5, 1));
    NodeState before = st;
    approx_state_update(k5, st, 0, false);
    for (int v = 1; v < 5; ++v) CHECK(st.core[v] == before.core[v]);
    CHECK(st.present[0] == 0);
}

TEST_CASE("approximate update misses cascaded peels that the exact peel catches") {
    int attach = 0;
    Graph g = oracles::cycle_with_handles(8, {3, 4}, &attach);
    NodeState approx = exact_state(g, std::vector<std::uint8_t>(g.node_count, 1));
    // whole graph starts as core
    for (int v = 0; v < g.node_count; ++v) CHECK(approx.core[v] == 1);

    approx_state_update(g, approx, attach, false);
    NodeState exact = exact_state(g, approx.present);
    int approx_alive = 0, exact_alive = 0;
    for (int v = 0; v < g.node_count; ++v) {
        if (exact.s(v)) {
            ++exact_alive;
            CHECK(approx.s(v) == 1);  // exact core is contained in the approximate one
        }
        if (approx.s(v)) ++approx_alive;
    }
    CHECK(approx_alive > exact_alive);  // the divergence is real on this construction
}

TEST_CASE("hl-approx terminates with an exactly core-free residual") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Graph g = oracles::random_graph(50, 120, seed * 23);
        DeletionTrace trace = break_core(g, MethodSpec::parse("hl-approx"));
        CHECK(is_core_free(g, present_mask_at(g, trace, trace.transition)));
    }
}

TEST_CASE("hl needs fewer deletions than the static degree ranking on average") {
    double hl_total = 0.0, dc_total = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Graph g = generate_er(300, 4.0, seed);
        hl_total += break_core(g, MethodSpec::parse("hl")).transition;
        dc_total += break_core(g, MethodSpec::parse("dc")).transition;
    }
    CHECK(hl_total < dc_total);
}

TEST_CASE("trace snapshots flip exactly one node per step") {
    Graph g = oracles::random_graph(30, 70, 88);
    DeletionTrace trace = break_core(g, MethodSpec::parse("hl"));
    for (int step = 1; step <= trace.transition; ++step) {
        auto prev = present_mask_at(g, trace, step - 1);
        auto cur = present_mask_at(g, trace, step);
        int flips = 0;
        for (int v = 0; v < g.node_count; ++v) {
            if (prev[v] != cur[v]) {
                ++flips;
                CHECK(prev[v] == 1);
                CHECK(cur[v] == 0);
            }
        }
        CHECK(flips == 1);
        int present = 0;
        for (auto b : cur) present += b;
        CHECK(present == trace.present_count[step - 1]);
    }
    CHECK_THROWS_AS(present_mask_at(g, trace, trace.transition + 1), std::invalid_argument);
}

TEST_CASE("scale-free graphs need fewer deletions than er at equal degree") {
    double er_total = 0.0, sf_total = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        er_total += break_core(generate_er(500, 5.0, seed), MethodSpec::parse("hl")).transition;
        sf_total += break_core(generate_sf(500, 5.0, seed), MethodSpec::parse("hl")).transition;
    }
    CHECK(sf_total < er_total);
}

TEST_CASE("literal-pseudocode approx runs still terminate core-free") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Graph g = oracles::random_graph(40, 100, seed * 19);
        MethodSpec spec = MethodSpec::parse("hl-approx");
        spec.approx_literal_pseudocode = true;
        DeletionTrace trace = break_core(g, spec);
        CHECK(is_core_free(g, present_mask_at(g, trace, trace.transition)));
    }
}

TEST_CASE("higher-order core influence drives the break loop") {
    Graph g = oracles::random_graph(40, 90, 2718);
    for (int l : {2, 3}) {
        MethodSpec spec = MethodSpec::parse("hl");
        spec.l_order = l;
        DeletionTrace trace = break_core(g, spec);
        CHECK(is_core_free(g, present_mask_at(g, trace, trace.transition)));
        CoverResult cover = cover_from_trace(g, trace);
        CHECK(cover.valid);
    }
}
