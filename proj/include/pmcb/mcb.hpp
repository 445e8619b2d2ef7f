#ifndef PMCB_MCB_HPP
#define PMCB_MCB_HPP

#include <cstdint>
#include <vector>

#include "pmcb/cycles.hpp"
#include "pmcb/io.hpp"
#include "pmcb/lexsp.hpp"
#include "pmcb/planar_graph.hpp"

namespace pmcb {

struct McbOptions {
    uint32_t base_case_threshold = 32;  // largest size handled by the explicit greedy
    bool instrument = false;            // recheck structures after every mutation
    double separator_factor = 8.0;      // boundary ceiling over sqrt(n)
    ExecMode exec = ExecMode::Parallel;
};

/// Shortest-path tree kept for the implicit representation. Vertices are
/// stored by persistent label in discovery order (root first), so a cycle is
/// expanded by walking parent positions.
struct ImplicitTree {
    std::vector<uint32_t> verts;        // labels
    std::vector<uint32_t> parent_pos;   // index into verts, kNone for the root
    std::vector<uint32_t> parent_edge;  // root-graph edge id, kNone for the root
    std::vector<uint32_t> depth;
    std::vector<uint32_t> order_by_label;  // positions sorted by label

    uint32_t root_label() const { return verts[0]; }
    uint32_t pos_of_label(uint32_t label) const;
    size_t storage_bytes() const {
        return verts.size() * 16 + order_by_label.size() * 4;
    }
};

struct ImplicitTriple {
    uint32_t tree;  // index into ImplicitMcb::trees
    uint32_t edge;  // root-graph edge id
    uint64_t w;
    uint32_t len;
};

struct McbRegionNode {
    uint32_t parent = kNone;
    uint32_t triple = kNone;              // kNone for the external region
    uint32_t face = kNone;                // unique elementary face, kNone until final
    uint32_t white_int_at_creation = 0;   // elementary faces inside the cycle at its split
    uint32_t white_ext_at_creation = 0;   // elementary faces left outside in its region
};

/// The implicit GMCB: trees, triples, the region tree, and the face map.
struct ImplicitMcb {
    std::vector<ImplicitTree> trees;
    std::vector<ImplicitTriple> triples;   // greedy order
    std::vector<McbRegionNode> regions;    // node 0 = external region
    std::vector<uint32_t> node_of_triple;  // triple -> region node
    std::vector<uint32_t> node_of_face;    // root-graph face -> leaf region node

    uint64_t total_weight() const {
        uint64_t s = 0;
        for (const auto& t : triples) s += t.w;
        return s;
    }
    uint64_t total_length() const {
        uint64_t s = 0;
        for (const auto& t : triples) s += t.len;
        return s;
    }
    size_t storage_bytes() const;
};

/// The recursive greedy algorithm: separator, two recursive calls, then one
/// merged greedy pass over recursive survivors and boundary Horton cycles.
/// Inputs below the base-case threshold go to the explicit greedy.
ImplicitMcb recursive_gmcb(const PlanarGraph& g, McbOptions opt = {});

/// Expands one triple to an explicit simple cycle (edges of g).
Cycle expand_cycle(const PlanarGraph& g, const ImplicitMcb& mcb, uint32_t triple_index);

/// Expands the whole basis.
CycleBasis explicit_mcb(const PlanarGraph& g, const ImplicitMcb& mcb);

ImcbDocument to_imcb(const PlanarGraph& g, const ImplicitMcb& mcb);
ImplicitMcb from_imcb(const ImcbDocument& doc);

/// Runtime counters of the last recursive_gmcb call on this thread.
struct McbRunStats {
    uint64_t levels = 0;
    uint64_t base_cases = 0;
    uint64_t horton_candidates = 0;
    uint64_t accepted_horton = 0;
    uint64_t accepted_recursive = 0;
    uint64_t max_boundary = 0;
    uint64_t instrument_checks = 0;
};

const McbRunStats& last_run_stats();

} // namespace pmcb

#endif
