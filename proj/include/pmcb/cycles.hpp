#ifndef PMCB_CYCLES_HPP
#define PMCB_CYCLES_HPP

#include <cstdint>
#include <vector>

#include "pmcb/lexsp.hpp"
#include "pmcb/planar_graph.hpp"

namespace pmcb {

/// Simple cycle as a sorted edge-id set plus its weight. Horton provenance
/// (root, non-tree edge) kept when applicable.
struct Cycle {
    std::vector<uint32_t> edges;  // sorted local edge ids
    uint64_t weight = 0;
    uint32_t root = kNone;
    uint32_t nontree_edge = kNone;

    uint32_t length() const { return uint32_t(edges.size()); }
};

/// Sorted vertex labels of a cycle's edge set.
std::vector<uint32_t> cycle_vertex_labels(const PlanarGraph& g,
                                          const std::vector<uint32_t>& edges);

struct CycleBasis {
    std::vector<Cycle> cycles;

    uint64_t total_weight() const {
        uint64_t s = 0;
        for (const auto& c : cycles) s += c.weight;
        return s;
    }
    uint64_t total_length() const {
        uint64_t s = 0;
        for (const auto& c : cycles) s += c.edges.size();
        return s;
    }
};

/// Deterministic candidate order shared by the explicit oracle and the
/// recursive algorithm: (weight, length, sorted vertex labels, edge ids),
/// all lexicographic. The vertex-label key mirrors the index tie rule that
/// makes shortest paths unique, so every cycle the greedy accepts stays
/// isometric under the tie-broken metric; the edge key separates cycles on
/// the same vertex set.
inline bool cycle_order_less(const PlanarGraph& g, const Cycle& a, const Cycle& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    std::vector<uint32_t> va = cycle_vertex_labels(g, a.edges);
    std::vector<uint32_t> vb = cycle_vertex_labels(g, b.edges);
    if (va != vb) return va < vb;
    return a.edges < b.edges;
}

/// Horton candidates C(r,e) for every root and non-tree edge whose two tree
/// paths meet only at the root; candidates where the paths overlap are
/// dropped. Result sorted by cycle_order_less.
std::vector<Cycle> horton_cycles(const PlanarGraph& g, const std::vector<uint32_t>& roots,
                                 ExecMode mode = ExecMode::Serial);

/// Greedy GF(2) extraction of a minimum-weight basis from a spanning,
/// sorted candidate list. Independent verification oracle.
CycleBasis gf2_extract(const PlanarGraph& g, const std::vector<Cycle>& sorted_cycles,
                       uint32_t dim);

/// Region bookkeeping produced by the explicit greedy run; node 0 is the
/// external region.
struct GreedyRegionNode {
    uint32_t parent = kNone;
    uint32_t basis_index = kNone;             // kNone for the external region
    uint32_t unique_face = kNone;             // filled at the end of the run
    uint32_t probe_face = kNone;              // some face inside the cycle
    uint32_t white_int_at_creation = 0;       // faces inside the cycle when split
    uint32_t white_ext_at_creation = 0;       // faces left outside in its region
    std::vector<uint32_t> children;
};

struct GreedyResult {
    CycleBasis basis;                    // greedy order
    std::vector<uint32_t> node_of_cycle; // basis index -> region node
    std::vector<GreedyRegionNode> nodes;
    std::vector<uint32_t> node_of_face;  // face -> final (leaf) region node
};

/// The generic greedy algorithm over Horton candidates from all vertices,
/// with the separation test evaluated on an explicit face partition.
/// Quadratic; the desk-scale ground truth.
GreedyResult greedy_mcb_region(const PlanarGraph& g, ExecMode mode = ExecMode::Serial);

inline CycleBasis greedy_mcb_explicit(const PlanarGraph& g) {
    return greedy_mcb_region(g).basis;
}

/// True iff for every pair of cycle vertices some shortest path lies on the
/// cycle (distance compared exactly against Dijkstra).
bool check_isometric(const PlanarGraph& g, const Cycle& c);

/// True iff no two cycles of the basis cross (face-interior containment).
bool check_nested(const PlanarGraph& g, const CycleBasis& basis);

/// Faces strictly inside the cycle (the side not containing the external
/// face of the cycle's component).
std::vector<char> faces_inside(const PlanarGraph& g, const std::vector<uint32_t>& cycle_edges);

} // namespace pmcb

#endif
