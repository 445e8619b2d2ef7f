#include "doctest.h"

#include <cmath>
#include <set>

#include "pmcb/io.hpp"
#include "pmcb/separator.hpp"
#include "test_util.hpp"

using namespace pmcb;
using namespace pmcb_test;

namespace {

PlanarGraph grid(uint32_t k) {
    std::vector<Coord> pts;
    std::vector<EdgeRec> edges;
    for (uint32_t y = 0; y < k; ++y)
        for (uint32_t x = 0; x < k; ++x) pts.push_back({int64_t(x) * U, int64_t(y) * U});
    auto id = [&](uint32_t x, uint32_t y) { return y * k + x; };
    for (uint32_t y = 0; y < k; ++y)
        for (uint32_t x = 0; x < k; ++x) {
            if (x + 1 < k) edges.push_back({id(x, y), id(x + 1, y), 1});
            if (y + 1 < k) edges.push_back({id(x, y), id(x, y + 1), 1});
        }
    return build_embedding(pts, edges);
}

void check_separator(const PlanarGraph& g, const SeparatorResult& sep) {
    uint32_t n = g.num_vertices();
    CHECK(3 * uint64_t(sep.interior_vertices) <= 2 * uint64_t(n));
    CHECK(3 * uint64_t(sep.exterior_vertices) <= 2 * uint64_t(n));
    CHECK(sep.boundary.size() + sep.interior_vertices + sep.exterior_vertices == n);
    CHECK(sep.pieces.size() == sep.boundary.size());
    // boundary vertices are marked OnJ, and only them
    std::set<uint32_t> bset(sep.boundary.begin(), sep.boundary.end());
    for (uint32_t v = 0; v < n; ++v)
        CHECK((sep.vertex_side[v] == Side::OnJ) == bset.count(v));
    // every edge on exactly one side, endpoints compatible
    for (uint32_t e = 0; e < g.num_edges(); ++e) {
        Side s = sep.edge_side[e];
        CHECK(s != Side::OnJ);
        for (uint32_t v : {g.edge(e).u, g.edge(e).v}) {
            CHECK((sep.vertex_side[v] == s || sep.vertex_side[v] == Side::OnJ));
        }
    }
    // pieces attach to consecutive boundary vertices
    for (size_t i = 0; i < sep.pieces.size(); ++i) {
        const SeparatorPiece& p = sep.pieces[i];
        CHECK(g.tail(p.occ_out_start) == sep.boundary[i]);
        CHECK(g.tail(p.occ_out_end) == sep.boundary[(i + 1) % sep.boundary.size()]);
        CHECK(g.face_of(p.occ_out_start) == p.host_face);
        CHECK(g.face_of(p.occ_out_end) == p.host_face);
        CHECK(sep.face_side[p.host_face] == Side::OnJ);
    }
}

} // namespace

TEST_CASE("K4 separator") {
    PlanarGraph g = fix_k4();
    SeparatorResult sep = cycle_separator(g);
    check_separator(g, sep);
    CHECK(sep.boundary.size() <= 3);
}

TEST_CASE("10x10 grid separator obeys the size bound") {
    PlanarGraph g = grid(10);
    SeparatorResult sep = cycle_separator(g);
    check_separator(g, sep);
    CHECK(sep.boundary.size() <= 4 * 10);  // c <= 4 at n = 100
    CHECK(sep.interior_vertices <= 66);
    CHECK(sep.exterior_vertices <= 66);
}

TEST_CASE("path graph gets a valid balanced separator") {
    std::vector<Coord> pts;
    std::vector<EdgeRec> edges;
    for (uint32_t i = 0; i < 12; ++i) {
        pts.push_back({int64_t(i) * U, (int64_t(i % 3) - 1) * U});
        if (i) edges.push_back({i - 1, i, 1});
    }
    PlanarGraph g = build_embedding(pts, edges);
    SeparatorResult sep = cycle_separator(g);
    check_separator(g, sep);
}

TEST_CASE("separator on random planar graphs") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        RandomPlanarOptions opt;
        if (seed % 2) opt.thin_to = 1.5;
        PlanarGraph g = gen_random_planar(30 + 20 * (seed % 4), seed, opt);
        SeparatorResult sep = cycle_separator(g);
        check_separator(g, sep);
        CHECK(double(sep.boundary.size()) <= 8.0 * std::sqrt(double(g.num_vertices())) + 1);
    }
}

TEST_CASE("too small input") {
    PlanarGraph g = build_embedding({{0, 0}, {U, 0}}, {{0, 1, 1}});
    CHECK_THROWS_AS(cycle_separator(g), Error);
}

TEST_CASE("split_graph partitions edges and shares the boundary") {
    for (uint64_t seed : {4, 11, 17}) {
        RandomPlanarOptions opt;
        if (seed == 11) opt.thin_to = 1.4;
        PlanarGraph g = gen_random_planar(50, seed, opt);
        SeparatorResult sep = cycle_separator(g);
        SplitGraphResult parts = split_graph(g, sep);
        CHECK(parts.interior.graph.num_edges() + parts.exterior.graph.num_edges() ==
              g.num_edges());
        // shared vertices = boundary
        std::set<uint32_t> vi(parts.interior.vertex_map.begin(), parts.interior.vertex_map.end());
        std::set<uint32_t> ve(parts.exterior.vertex_map.begin(), parts.exterior.vertex_map.end());
        std::set<uint32_t> shared;
        for (uint32_t v : vi)
            if (ve.count(v)) shared.insert(v);
        std::set<uint32_t> bset(sep.boundary.begin(), sep.boundary.end());
        CHECK(shared == bset);
        CHECK(vi.size() + ve.size() == g.num_vertices() + bset.size());
        // every component of each side touches the boundary
        for (const SubgraphResult* side : {&parts.interior, &parts.exterior}) {
            const PlanarGraph& sg = side->graph;
            for (uint32_t c = 0; c < sg.num_components(); ++c) {
                bool touches = false;
                for (uint32_t v = 0; v < sg.num_vertices(); ++v)
                    if (sg.component_of(v) == c && bset.count(side->vertex_map[v])) touches = true;
                CHECK(touches);
            }
        }
    }
}

TEST_CASE("boundary order is consistent with the rotation system") {
    // walking the boundary clockwise, each piece's host face must sit on the
    // right side: its occurrence corner lies between the walk darts
    PlanarGraph g = grid(8);
    SeparatorResult sep = cycle_separator(g);
    check_separator(g, sep);
    // interior vertices adjacent to boundary must be reachable without
    // crossing the cycle: sanity via split
    SplitGraphResult parts = split_graph(g, sep);
    CHECK(parts.interior.graph.num_vertices() ==
          sep.interior_vertices + uint32_t(sep.boundary.size()));
}
