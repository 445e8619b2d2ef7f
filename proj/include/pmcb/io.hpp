#ifndef PMCB_IO_HPP
#define PMCB_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pmcb/planar_graph.hpp"

namespace pmcb {

/// PLG v1 text document. Coordinates are decimals with at most six places,
/// stored exactly in micro-units.
struct PlgDocument {
    struct Vertex {
        uint32_t id;  // 1..n, dense
        Coord pos;
    };
    struct Edge {
        uint32_t u, v;  // 1-based vertex ids
        uint64_t w;
    };
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
};

PlgDocument parse_plg(std::istream& in);
PlgDocument parse_plg_string(const std::string& text);
std::string serialize_plg(const PlgDocument& doc);

PlgDocument to_plg(const PlanarGraph& g);
PlanarGraph from_plg(const PlgDocument& doc);

/// IMCB v1 text document: trees as parent arrays (vertex labels), triples,
/// and the region tree.
struct ImcbDocument {
    struct Tree {
        uint32_t root;                       // vertex label
        std::vector<uint32_t> vertices;      // vertex labels, root first
        std::vector<uint32_t> parent;        // index into vertices, kNone for root
        std::vector<uint32_t> parent_edge;   // edge id, kNone for root
        bool operator==(const Tree&) const = default;
    };
    struct Triple {
        uint32_t tree;
        uint32_t edge;
        uint64_t w;
        bool operator==(const Triple&) const = default;
    };
    struct RegionNode {
        uint32_t parent;   // region index, kNone for the external region
        uint32_t face;     // unique elementary face id, kNone for external
        uint32_t triple;   // defining triple id, kNone for external
        bool operator==(const RegionNode&) const = default;
    };
    uint32_t n = 0, m = 0;
    std::vector<Tree> trees;
    std::vector<Triple> triples;
    std::vector<RegionNode> regions;

    bool operator==(const ImcbDocument&) const = default;
};

ImcbDocument parse_imcb(std::istream& in);
ImcbDocument parse_imcb_string(const std::string& text);
std::string serialize_imcb(const ImcbDocument& doc);

/// The quadratic-lower-bound family: a weight-0 path v1..vn plus weight-1
/// chords (v1, v_{i+2}) laid out on a convex fan.
PlanarGraph gen_lower_bound(uint32_t n);

struct RandomPlanarOptions {
    uint64_t max_weight = 16;     // weights uniform in [0, max_weight]
    bool unweighted = false;      // all weights 1
    double thin_to = 0.0;         // if > 0: keep about thin_to * n edges (connected)
};

/// Delaunay triangulation of n seeded-random points with random integer
/// weights; optional edge-thinning that keeps the graph connected.
PlanarGraph gen_random_planar(uint32_t n, uint64_t seed, RandomPlanarOptions opt = {});

/// Exact Delaunay triangulation (integer coordinates). Exposed for tests.
std::vector<EdgeRec> delaunay_edges(const std::vector<Coord>& pts);

} // namespace pmcb

#endif
