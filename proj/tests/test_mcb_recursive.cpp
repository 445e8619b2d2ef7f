#include "doctest.h"

#include <functional>
#include <map>
#include <set>

#include "pmcb/io.hpp"
#include "pmcb/mcb.hpp"
#include "test_util.hpp"

using namespace pmcb;
using namespace pmcb_test;

namespace {

std::multiset<uint64_t> weights_of(const ImplicitMcb& m) {
    std::multiset<uint64_t> out;
    for (const auto& t : m.triples) out.insert(t.w);
    return out;
}

std::multiset<uint64_t> weights_of(const CycleBasis& b) {
    std::multiset<uint64_t> out;
    for (const auto& c : b.cycles) out.insert(c.weight);
    return out;
}

std::set<std::vector<uint32_t>> families_of(const PlanarGraph& g, const ImplicitMcb& m) {
    std::set<std::vector<uint32_t>> out;
    CycleBasis b = explicit_mcb(g, m);
    for (auto& c : b.cycles) out.insert(c.edges);
    return out;
}

// geometric region tree from an explicit nested basis: parent = the smallest
// cycle whose interior face set strictly contains this one
std::vector<uint32_t> geometric_parents(const PlanarGraph& g, const CycleBasis& b) {
    std::vector<std::vector<char>> ins;
    for (auto& c : b.cycles) ins.push_back(faces_inside(g, c.edges));
    auto count = [&](const std::vector<char>& v) {
        return std::count(v.begin(), v.end(), char(1));
    };
    std::vector<uint32_t> parent(b.cycles.size(), kNone);
    for (size_t i = 0; i < b.cycles.size(); ++i) {
        size_t best = SIZE_MAX;
        for (size_t j = 0; j < b.cycles.size(); ++j) {
            if (i == j) continue;
            bool contains = true;
            for (uint32_t f = 0; f < g.num_faces(); ++f)
                if (ins[i][f] && !ins[j][f]) contains = false;
            if (contains && count(ins[j]) > count(ins[i])) {
                if (best == SIZE_MAX || count(ins[j]) < count(ins[best])) best = j;
            }
        }
        parent[i] = best == SIZE_MAX ? kNone : uint32_t(best);
    }
    return parent;
}

void check_against_oracle(const PlanarGraph& g, McbOptions opt, bool check_family = true,
                          bool check_tree = false) {
    ImplicitMcb m = recursive_gmcb(g, opt);
    uint32_t dim = g.num_edges() - g.num_vertices() + 1;
    REQUIRE(m.triples.size() == dim);
    GreedyResult oracle = greedy_mcb_region(g);
    CHECK(m.total_weight() == oracle.basis.total_weight());
    CHECK(weights_of(m) == weights_of(oracle.basis));
    if (check_family) {
        std::set<std::vector<uint32_t>> fo;
        for (auto& c : oracle.basis.cycles) fo.insert(c.edges);
        CHECK(families_of(g, m) == fo);
    }
    CycleBasis expanded = explicit_mcb(g, m);
    CHECK(check_nested(g, expanded));
    for (auto& c : expanded.cycles) CHECK(check_isometric(g, c));
    // region bookkeeping
    REQUIRE(m.regions.size() == dim + 1);
    std::set<uint32_t> faces_seen;
    for (uint32_t f = 0; f < g.num_faces(); ++f) {
        uint32_t node = m.node_of_face[f];
        REQUIRE(node < m.regions.size());
        CHECK(m.regions[node].face == f);
        faces_seen.insert(node);
    }
    CHECK(faces_seen.size() == m.regions.size());
    if (check_tree) {
        // parent pointers must reproduce the geometric nesting of the basis
        auto gp = geometric_parents(g, expanded);
        for (uint32_t i = 0; i < m.triples.size(); ++i) {
            uint32_t node = m.node_of_triple[i];
            uint32_t parent = m.regions[node].parent;
            uint32_t expect = gp[i];
            if (expect == kNone) {
                CHECK(m.regions[parent].triple == kNone);
            } else {
                REQUIRE(parent < m.regions.size());
                CHECK(m.regions[parent].triple == expect);
            }
        }
    }
}

} // namespace

TEST_CASE("recursive gmcb on the triangle (base case)") {
    PlanarGraph g = fix_t3();
    ImplicitMcb m = recursive_gmcb(g);
    REQUIRE(m.triples.size() == 1);
    CHECK(m.total_weight() == 3);
    Cycle c = expand_cycle(g, m, 0);
    CHECK(c.edges == std::vector<uint32_t>{0, 1, 2});
}

TEST_CASE("lower-bound family: exact weights and lengths") {
    for (uint32_t n : {5u, 10u}) {
        PlanarGraph g = gen_lower_bound(n);
        McbOptions opt;
        opt.base_case_threshold = 4;  // force real recursion
        ImplicitMcb m = recursive_gmcb(g, opt);
        REQUIRE(m.triples.size() == n - 2);
        CHECK(m.total_weight() == n - 2);
        CHECK(m.total_length() == (n - 2) * (n + 3) / 2);
        std::multiset<uint64_t> lens;
        for (auto& t : m.triples) lens.insert(t.len);
        std::multiset<uint64_t> expect;
        for (uint32_t i = 1; i <= n - 2; ++i) expect.insert(i + 2);
        CHECK(lens == expect);
    }
}

TEST_CASE("recursive matches oracle with default threshold") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        RandomPlanarOptions ro;
        ro.max_weight = 6;
        if (seed % 2) ro.thin_to = 1.6;
        PlanarGraph g = gen_random_planar(30 + 4 * (seed % 9), seed, ro);
        check_against_oracle(g, McbOptions{});
    }
}

TEST_CASE("recursive matches oracle with deep recursion") {
    for (uint64_t seed = 1; seed <= 14; ++seed) {
        RandomPlanarOptions ro;
        ro.max_weight = 5;
        if (seed % 3 == 0) ro.thin_to = 1.5;
        if (seed % 4 == 0) ro.unweighted = true;
        PlanarGraph g = gen_random_planar(16 + 3 * (seed % 13), seed * 17, ro);
        McbOptions opt;
        opt.base_case_threshold = 4;
        check_against_oracle(g, opt, true, seed <= 6);
    }
}

TEST_CASE("instrumented run keeps structures equal to rebuilds") {
    for (uint64_t seed : {3, 8, 15}) {
        RandomPlanarOptions ro;
        ro.max_weight = 4;
        PlanarGraph g = gen_random_planar(26, seed, ro);
        McbOptions opt;
        opt.base_case_threshold = 6;
        opt.instrument = true;
        check_against_oracle(g, opt);
        CHECK(last_run_stats().instrument_checks > 0);
    }
}

TEST_CASE("unweighted graphs with heavy tie classes") {
    for (uint64_t seed : {5, 9}) {
        RandomPlanarOptions ro;
        ro.unweighted = true;
        PlanarGraph g = gen_random_planar(40, seed, ro);
        McbOptions opt;
        opt.base_case_threshold = 8;
        ImplicitMcb m = recursive_gmcb(g, opt);
        GreedyResult oracle = greedy_mcb_region(g);
        CHECK(m.total_weight() == oracle.basis.total_weight());
        CHECK(weights_of(m) == weights_of(oracle.basis));
        CycleBasis expanded = explicit_mcb(g, m);
        CHECK(check_nested(g, expanded));
    }
}

TEST_CASE("disconnected input is rejected") {
    PlanarGraph g = build_embedding({{0, 0}, {U, 0}, {0, U}, {9 * U, 9 * U}},
                                    {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
    CHECK_THROWS_AS(recursive_gmcb(g), Error);
}

TEST_CASE("expansion validates triple indices") {
    PlanarGraph g = fix_t3();
    ImplicitMcb m = recursive_gmcb(g);
    CHECK_THROWS_AS(expand_cycle(g, m, 5), Error);
}

TEST_CASE("imcb document round trip") {
    PlanarGraph g = gen_random_planar(24, 4);
    ImplicitMcb m = recursive_gmcb(g);
    ImcbDocument doc = to_imcb(g, m);
    CHECK(doc.triples.size() == m.triples.size());
    std::string s = serialize_imcb(doc);
    ImcbDocument doc2 = parse_imcb_string(s);
    CHECK(doc == doc2);
    ImplicitMcb m2 = from_imcb(doc2);
    CHECK(m2.triples.size() == m.triples.size());
    CHECK(m2.trees.size() == m.trees.size());
    uint64_t w = 0;
    for (auto& t : m2.triples) w += t.w;
    CHECK(w == m.total_weight());
}

TEST_CASE("explicit mcb on the lower-bound family via expansion") {
    PlanarGraph g = gen_lower_bound(12);
    ImplicitMcb m = recursive_gmcb(g);
    CycleBasis b = explicit_mcb(g, m);
    CHECK(b.total_length() == (12 - 2) * (12 + 3) / 2);
    CHECK(b.total_weight() == 10);
}

TEST_CASE("storage accounting is positive and grows with n") {
    PlanarGraph a = gen_random_planar(20, 2);
    PlanarGraph b = gen_random_planar(80, 2);
    ImplicitMcb ma = recursive_gmcb(a);
    ImplicitMcb mb = recursive_gmcb(b);
    CHECK(ma.storage_bytes() > 0);
    CHECK(mb.storage_bytes() > ma.storage_bytes());
}
