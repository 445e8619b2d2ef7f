#include "doctest.h"

#include <functional>
#include <set>

#include "pmcb/io.hpp"
#include "pmcb/planar_graph.hpp"
#include "test_util.hpp"

using namespace pmcb;
using namespace pmcb_test;

TEST_CASE("triangle embedding") {
    PlanarGraph g = fix_t3();
    CHECK(g.num_vertices() == 3);
    CHECK(g.num_edges() == 3);
    CHECK(g.num_faces() == 2);
    CHECK(g.num_components() == 1);
    uint32_t ext = 0;
    for (uint32_t f = 0; f < g.num_faces(); ++f)
        if (g.face(f).is_external) ++ext;
    CHECK(ext == 1);
}

TEST_CASE("K4 embedding and face walks") {
    PlanarGraph g = fix_k4();
    CHECK(g.num_edges() == 6);
    CHECK(g.num_faces() == 4);
    // hand enumeration: three inner triangles touch the centre, the external
    // face is the outer triangle
    uint32_t triangles_with_centre = 0;
    for (uint32_t f = 0; f < g.num_faces(); ++f) {
        const Face& face = g.face(f);
        CHECK(face.darts.size() == 3);
        bool touches_centre = false;
        for (uint32_t d : face.darts)
            if (g.tail(d) == 3) touches_centre = true;
        if (face.is_external) {
            CHECK(!touches_centre);
        } else if (touches_centre) {
            ++triangles_with_centre;
        }
    }
    CHECK(triangles_with_centre == 3);
}

TEST_CASE("crossing segments rejected") {
    std::vector<Coord> pts = {{0, 0}, {U, U}, {0, U}, {U, 0}};
    std::vector<EdgeRec> edges = {{0, 1, 1}, {2, 3, 1}};
    CHECK_THROWS_AS(build_embedding(pts, edges), Error);
    try {
        build_embedding(pts, edges);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EulerViolation);
    }
}

TEST_CASE("single edge graph: one face traversing the edge twice") {
    PlanarGraph g = build_embedding({{0, 0}, {U, 0}}, {{0, 1, 5}});
    CHECK(g.num_faces() == 1);
    CHECK(g.face(0).darts.size() == 2);
    CHECK(g.face(0).is_external);
}

TEST_CASE("duplicate vertex coordinates rejected") {
    CHECK_THROWS_AS(build_embedding({{0, 0}, {0, 0}}, {}), Error);
}

TEST_CASE("face boundary lengths sum to 2m") {
    for (uint64_t seed : {1, 2, 3}) {
        PlanarGraph g = gen_random_planar(24, seed);
        size_t total = 0;
        for (uint32_t f = 0; f < g.num_faces(); ++f) total += g.face(f).darts.size();
        CHECK(total == 2 * g.num_edges());
        // cycle-space dimension
        CHECK(g.num_faces() - 1 == g.num_edges() - g.num_vertices() + 1);
    }
}

TEST_CASE("trace_faces matches stored faces") {
    PlanarGraph g = gen_random_planar(16, 7);
    auto faces = trace_faces(g);
    CHECK(faces.size() == g.num_faces());
}

TEST_CASE("dual graph of the triangle") {
    PlanarGraph g = fix_t3();
    DualGraph d = dual_graph(g);
    CHECK(d.graph.num_vertices() == 2);
    CHECK(d.graph.num_edges() == 3);
    // three parallel dual edges
    for (uint32_t e = 0; e < 3; ++e) {
        CHECK(d.graph.edge(e).u != d.graph.edge(e).v);
        CHECK(d.graph.edge(e).w == g.edge(e).w);
    }
}

TEST_CASE("dual graph of K4 and the lower-bound family") {
    PlanarGraph k4 = fix_k4();
    DualGraph d = dual_graph(k4);
    CHECK(d.graph.num_vertices() == 4);
    CHECK(d.graph.num_edges() == 6);

    PlanarGraph glb = gen_lower_bound(5);
    CHECK(glb.num_edges() == 7);  // m = 2n - 3
    DualGraph dg = dual_graph(glb);
    CHECK(dg.graph.num_vertices() == 4);  // f = m - n + 2
}

TEST_CASE("dual degree equals face boundary length") {
    PlanarGraph g = gen_random_planar(20, 11);
    DualGraph d = dual_graph(g);
    for (uint32_t f = 0; f < g.num_faces(); ++f)
        CHECK(d.graph.degree(d.vertex_of_face[f]) == g.face(f).darts.size());
    // dual faces correspond one-to-one to primal vertices
    std::set<uint32_t> pv(d.primal_vertex_of_face.begin(), d.primal_vertex_of_face.end());
    CHECK(pv.size() == g.num_vertices());
}

namespace {

// checks the cycle-weight multiset of the multigraph survives simplification
bool cycle_weights_preserved(const PlanarGraph& multi, const Simplified& s) {
    auto mcycles = all_simple_cycles(multi);
    std::multiset<uint64_t> multi_weights;
    for (auto& c : mcycles) multi_weights.insert(edge_set_weight(multi, c));
    // self-loops are cycles of the multigraph
    for (uint32_t e = 0; e < multi.num_edges(); ++e)
        if (multi.edge(e).u == multi.edge(e).v) multi_weights.insert(multi.edge(e).w);
    // 2-cycles from parallel pairs
    for (uint32_t e1 = 0; e1 < multi.num_edges(); ++e1)
        for (uint32_t e2 = e1 + 1; e2 < multi.num_edges(); ++e2) {
            auto &a = multi.edge(e1), &b = multi.edge(e2);
            if (a.u != a.v && ((a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u)))
                multi_weights.insert(a.w + b.w);
        }
    std::multiset<uint64_t> simple_weights;
    for (auto& c : all_simple_cycles(s.graph))
        simple_weights.insert(edge_set_weight(s.graph, c));
    return multi_weights == simple_weights;
}

} // namespace

TEST_CASE("simplify multigraph: parallel edges") {
    PlanarGraph tri = fix_t3();
    DualGraph d = dual_graph(tri);  // 2 vertices, 3 parallel edges
    Simplified s = simplify_multigraph(d.graph);
    CHECK(s.graph.num_vertices() == 4);  // two subdivision vertices
    CHECK(s.graph.num_edges() == 5);
    CHECK(s.graph.total_weight() == d.graph.total_weight());
    CHECK(cycle_weights_preserved(d.graph, s));
}

TEST_CASE("simplify multigraph: self-loop of weight 4") {
    // single edge graph: its dual is one vertex with one loop
    PlanarGraph path = build_embedding({{0, 0}, {U, 0}}, {{0, 1, 4}});
    DualGraph d = dual_graph(path);
    CHECK(d.graph.num_vertices() == 1);
    CHECK(d.graph.num_edges() == 1);
    Simplified s = simplify_multigraph(d.graph);
    CHECK(s.graph.num_vertices() == 3);  // a, x, y
    CHECK(s.graph.num_edges() == 3);
    std::multiset<uint64_t> ws;
    for (uint32_t e = 0; e < 3; ++e) ws.insert(s.graph.edge(e).w);
    CHECK(ws == std::multiset<uint64_t>{2, 1, 1});
}

TEST_CASE("simplify keeps simple graphs unchanged") {
    PlanarGraph g = fix_k4();
    Simplified s = simplify_multigraph(g);
    CHECK(s.graph.num_vertices() == g.num_vertices());
    CHECK(s.graph.num_edges() == g.num_edges());
}

TEST_CASE("simplified dual preserves cycle weights (brute force)") {
    for (uint64_t seed : {3, 4}) {
        PlanarGraph g = gen_random_planar(6, seed);
        DualGraph d = dual_graph(g);
        Simplified s = simplify_multigraph(d.graph);
        CHECK(s.graph.num_edges() - s.graph.num_vertices() ==
              d.graph.num_edges() - d.graph.num_vertices());
        CHECK(cycle_weights_preserved(d.graph, s));
    }
}

TEST_CASE("connected components") {
    PlanarGraph t3 = fix_t3();
    auto cs = connected_components(t3);
    CHECK(cs.components.size() == 1);

    // triangle plus isolated vertex
    PlanarGraph g = build_embedding({{0, 0}, {U, 0}, {0, U}, {5 * U, 5 * U}},
                                    {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
    CHECK(g.num_components() == 2);
    auto cs2 = connected_components(g);
    CHECK(cs2.components.size() == 2);
    CHECK(cs2.components[0].num_vertices() == 3);
    CHECK(cs2.components[1].num_vertices() == 1);
    CHECK(cs2.components[1].num_faces() == 1);

    PlanarGraph empty = build_embedding({}, {});
    CHECK(empty.num_components() == 0);
    CHECK(connected_components(empty).components.empty());
}

TEST_CASE("induced subgraph external faces agree with coordinates") {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        PlanarGraph g = gen_random_planar(20, seed);
        std::vector<char> ekeep(g.num_edges(), 0), vkeep(g.num_vertices(), 1);
        for (uint32_t e = 0; e < g.num_edges(); ++e) ekeep[e] = (e * 2654435761u + seed) % 3 != 0;
        SubgraphResult sub = induced_subgraph(g, ekeep, vkeep);
        // coordinates are present, so assembly picked area-based externals;
        // the peeling must have agreed (it throws on mismatch only for the
        // rebuild path, so compare against a fresh coordinate build)
        PlanarGraph rebuilt = from_plg(to_plg(sub.graph));
        REQUIRE(rebuilt.num_faces() == sub.graph.num_faces());
        REQUIRE(rebuilt.num_components() == sub.graph.num_components());
        for (uint32_t c = 0; c < sub.graph.num_components(); ++c) {
            const Face& a = sub.graph.face(sub.graph.external_face(c));
            const Face& b = rebuilt.face(rebuilt.external_face(c));
            CHECK(a.darts.size() == b.darts.size());
        }
    }
}
