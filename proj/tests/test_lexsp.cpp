#include "doctest.h"

#include <functional>
#include <random>

#include "pmcb/io.hpp"
#include "pmcb/lexsp.hpp"
#include "test_util.hpp"

using namespace pmcb;
using namespace pmcb_test;

TEST_CASE("lexweight ordering and addition") {
    LexWeight a{2, 3}, b{2, 4}, c{3, 0};
    CHECK(a < b);
    CHECK(b < c);
    CHECK((a + b) == LexWeight{4, 7});
}

TEST_CASE("C4: tie broken toward the smaller index") {
    PlanarGraph g = fix_c4();
    LexSPT t = lex_sp_tree(g, 0);
    CHECK(t.parent(1) == 0);
    CHECK(t.parent(3) == 0);
    CHECK(t.parent(2) == 1);  // via vertex 2 (label 2 < 4)
    CHECK(t.lex_compare(2, 1, 3) == -1);
    CHECK(t.lex_compare(2, 1, 1) == 0);
}

TEST_CASE("path graph distances") {
    PlanarGraph g = build_embedding({{0, 0}, {U, 0}, {2 * U, 0}}, {{0, 1, 1}, {1, 2, 1}});
    LexSPT t = lex_sp_tree(g, 0);
    CHECK(t.dist(2) == LexWeight{2, 2});
    CHECK(t.parent(2) == 1);
}

TEST_CASE("lower-bound family: weight-0 chain beats weight-1 chords") {
    PlanarGraph g = gen_lower_bound(5);
    LexSPT t = lex_sp_tree(g, 0);
    for (uint32_t j = 1; j < 5; ++j) CHECK(t.dist(j) == LexWeight{0, j});
}

TEST_CASE("disconnected input rejected") {
    PlanarGraph g = build_embedding({{0, 0}, {U, 0}, {3 * U, 3 * U}, {4 * U, 3 * U}},
                                    {{0, 1, 1}, {2, 3, 1}});
    CHECK_THROWS_AS(lex_sp_tree(g, 0), Error);
}

TEST_CASE("path_min_index against a linear scan") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        PlanarGraph g = gen_random_planar(40, rep + 100);
        LexSPT t = lex_sp_tree(g, uint32_t(rng() % 40));
        for (int q = 0; q < 50; ++q) {
            uint32_t a = uint32_t(rng() % 40);
            uint32_t steps = t.depth(a) ? uint32_t(rng() % t.depth(a)) : 0;
            uint32_t anc = t.ancestor(a, steps);
            REQUIRE(anc != kNone);
            uint32_t expect = g.label(a);
            for (uint32_t v = a;; v = t.parent(v)) {
                expect = std::min(expect, g.label(v));
                if (v == anc) break;
            }
            CHECK(t.path_min_index(a, anc) == expect);
        }
        // a == anc
        CHECK(t.path_min_index(5, 5) == g.label(5));
        // non-ancestor errors
        uint32_t leafish = t.order().back();
        if (t.depth(leafish) > 0 && t.parent(t.order()[1]) == t.source()) {
            uint32_t other = t.order()[1];
            if (other != leafish && t.ancestor(leafish, t.depth(leafish) - t.depth(other)) != other)
                CHECK_THROWS_AS(t.path_min_index(leafish, other), Error);
        }
    }
}

TEST_CASE("table consistency invariants") {
    PlanarGraph g = gen_random_planar(30, 12);
    LexSPT t = lex_sp_tree(g, 3);
    for (uint32_t v = 0; v < g.num_vertices(); ++v) {
        if (v == 3) continue;
        CHECK(t.dist(v) == t.dist(t.parent(v)) + LexWeight{g.edge(t.parent_edge(v)).w, 1});
        CHECK(t.table_up(0, v) == t.parent(v));
        for (uint32_t i = 1; i < t.table_levels(); ++i) {
            uint32_t mid = t.table_up(i - 1, v);
            if (mid == kNone || t.table_up(i - 1, mid) == kNone) break;
            CHECK(t.table_up(i, v) == t.table_up(i - 1, mid));
            CHECK(t.table_min(i, v) == std::min(t.table_min(i - 1, v), t.table_min(i - 1, mid)));
        }
    }
}

namespace {

std::vector<uint32_t> tree_path(const LexSPT& t, uint32_t v) {
    std::vector<uint32_t> p;
    for (uint32_t x = v;; x = t.parent(x)) {
        p.push_back(x);
        if (x == t.source()) break;
    }
    std::reverse(p.begin(), p.end());
    return p;
}

} // namespace

TEST_CASE("lex-shortest paths match exhaustive enumeration (n <= 10)") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        RandomPlanarOptions opt;
        opt.max_weight = 3;  // force plenty of ties
        PlanarGraph g = gen_random_planar(4 + seed % 7, seed, opt);
        for (uint32_t s = 0; s < g.num_vertices(); ++s) {
            LexSPT t = lex_sp_tree(g, s);
            for (uint32_t v = 0; v < g.num_vertices(); ++v) {
                if (v == s) continue;
                auto paths = all_simple_paths(g, s, v);
                REQUIRE(!paths.empty());
                size_t best = 0;
                for (size_t i = 1; i < paths.size(); ++i)
                    if (lex_path_compare(g, paths[i], paths[best]) < 0) best = i;
                // uniqueness: no other path compares equal
                for (size_t i = 0; i < paths.size(); ++i)
                    if (i != best) CHECK(lex_path_compare(g, paths[i], paths[best]) > 0);
                CHECK(tree_path(t, v) == paths[best]);
            }
        }
    }
}

TEST_CASE("projection: lex distances drop to plain shortest distances") {
    for (uint64_t seed : {2, 9, 21}) {
        PlanarGraph g = gen_random_planar(30, seed);
        LexSPT t = lex_sp_tree(g, 1);
        auto d = dijkstra(g, 1);
        for (uint32_t v = 0; v < g.num_vertices(); ++v) CHECK(t.dist(v).w == d[v]);
    }
}

TEST_CASE("determinism across runs and execution modes") {
    PlanarGraph g = gen_random_planar(50, 4);
    std::vector<uint32_t> sources{0, 5, 9, 13};
    auto serial = lex_sp_forest(g, sources, ExecMode::Serial);
    auto parallel = lex_sp_forest(g, sources, ExecMode::Parallel);
    for (size_t i = 0; i < sources.size(); ++i) {
        for (uint32_t v = 0; v < g.num_vertices(); ++v) {
            CHECK(serial[i].parent(v) == parallel[i].parent(v));
            CHECK(serial[i].dist(v) == parallel[i].dist(v));
        }
    }
}

TEST_CASE("dropping tables frees storage and disables table queries") {
    PlanarGraph g = gen_random_planar(20, 2);
    LexSPT t = lex_sp_tree(g, 0);
    size_t before = t.storage_bytes();
    t.drop_tables();
    CHECK(t.storage_bytes() < before);
    CHECK_THROWS_AS(t.path_min_index(1, 0), Error);
}
