#include "doctest.h"

#include "pmcb/io.hpp"
#include "test_util.hpp"

using namespace pmcb;
using namespace pmcb_test;

TEST_CASE("plg round trip is byte stable") {
    PlanarGraph g = fix_t3();
    PlgDocument doc = to_plg(g);
    std::string s1 = serialize_plg(doc);
    PlgDocument doc2 = parse_plg_string(s1);
    std::string s2 = serialize_plg(doc2);
    CHECK(s1 == s2);
    PlanarGraph g2 = from_plg(doc2);
    CHECK(g2.num_edges() == g.num_edges());
    CHECK(g2.num_faces() == g.num_faces());
}

TEST_CASE("plg parse errors carry line numbers") {
    std::string text = "PLG 1\n3 3\n1 0.0 0.0\n2 1.0 0.0\n";  // truncated
    try {
        parse_plg_string(text);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(e.line() == 4);
    }
    std::string neg = "PLG 1\n2 1\n1 0.0 0.0\n2 1.0 0.0\n1 2 -5\n";
    try {
        parse_plg_string(neg);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeWeight);
    }
}

TEST_CASE("plg coordinates parse exactly to micro-units") {
    std::string text = "PLG 1\n2 1\n1 0.000001 -2.5\n2 3 4.25\n1 2 7\n";
    PlgDocument doc = parse_plg_string(text);
    CHECK(doc.vertices[0].pos.x == 1);
    CHECK(doc.vertices[0].pos.y == -2500000);
    CHECK(doc.vertices[1].pos.x == 3000000);
    CHECK(doc.vertices[1].pos.y == 4250000);
}

TEST_CASE("imcb document round trip") {
    ImcbDocument doc;
    doc.n = 5;
    doc.m = 7;
    ImcbDocument::Tree t;
    t.root = 1;
    t.vertices = {1, 2, 3};
    t.parent = {kNone, 0, 0};
    t.parent_edge = {kNone, 0, 6};
    doc.trees.push_back(t);
    doc.triples.push_back({0, 4, 1});
    doc.regions.push_back({kNone, kNone, kNone});
    doc.regions.push_back({0, 2, 0});
    std::string s = serialize_imcb(doc);
    ImcbDocument doc2 = parse_imcb_string(s);
    CHECK(doc == doc2);
    CHECK(serialize_imcb(doc2) == s);
}

TEST_CASE("lower-bound family structure") {
    PlanarGraph g5 = gen_lower_bound(5);
    CHECK(g5.num_vertices() == 5);
    CHECK(g5.num_edges() == 7);
    PlanarGraph g3 = gen_lower_bound(3);
    std::multiset<uint64_t> ws;
    for (uint32_t e = 0; e < g3.num_edges(); ++e) ws.insert(g3.edge(e).w);
    CHECK(ws == std::multiset<uint64_t>{0, 0, 1});
    CHECK_THROWS_AS(gen_lower_bound(2), Error);
}

TEST_CASE("random planar generator is deterministic and planar") {
    PlanarGraph a = gen_random_planar(40, 9);
    PlanarGraph b = gen_random_planar(40, 9);
    CHECK(a.num_edges() == b.num_edges());
    for (uint32_t e = 0; e < a.num_edges(); ++e) {
        CHECK(a.edge(e).u == b.edge(e).u);
        CHECK(a.edge(e).v == b.edge(e).v);
        CHECK(a.edge(e).w == b.edge(e).w);
    }
    CHECK(a.num_edges() <= 3 * a.num_vertices() - 6);
    // validates as a straight-line embedding
    PlanarGraph c = from_plg(to_plg(a));
    CHECK(c.num_faces() == a.num_faces());
}

TEST_CASE("random planar generator thinning keeps connectivity") {
    RandomPlanarOptions opt;
    opt.thin_to = 1.4;
    PlanarGraph g = gen_random_planar(60, 5, opt);
    CHECK(g.is_connected());
    CHECK(g.num_edges() <= uint32_t(1.5 * 60));
    CHECK(g.num_edges() >= 59);
}

TEST_CASE("delaunay edges triangulate") {
    PlanarGraph g = gen_random_planar(100, 3);
    CHECK(g.is_connected());
    CHECK(g.num_edges() >= 2 * g.num_vertices() - 4);  // hull >= 3
}
