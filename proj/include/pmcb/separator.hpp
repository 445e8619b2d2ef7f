#ifndef PMCB_SEPARATOR_HPP
#define PMCB_SEPARATOR_HPP

#include <cstdint>
#include <vector>

#include "pmcb/planar_graph.hpp"

namespace pmcb {

enum class Side : uint8_t { Interior, Exterior, OnJ };

/// One curve piece of the separator, connecting boundary[i] to
/// boundary[(i+1) % r] through the interior of a single face of g.
/// `occ_out_*` give the face-walk occurrence the piece attaches to at each
/// endpoint, encoded as the walk dart leaving that vertex; the piece lies in
/// the rotation corner between that dart and its rotation successor.
struct SeparatorPiece {
    uint32_t host_face;
    uint32_t occ_out_start;
    uint32_t occ_out_end;
};

/// Jordan-curve vertex separator: an ordered boundary cycle (clockwise, so
/// the interior is to the right), curve pieces through faces, and a side
/// assignment for every vertex, edge and face of g. No edge is crossed;
/// faces pierced by the curve are marked OnJ.
struct SeparatorResult {
    std::vector<uint32_t> boundary;      // V_J in clockwise order
    std::vector<SeparatorPiece> pieces;  // pieces[i]: boundary[i] -> boundary[i+1]
    std::vector<Side> vertex_side;
    std::vector<Side> edge_side;         // Interior or Exterior only
    std::vector<Side> face_side;
    uint32_t interior_vertices = 0;
    uint32_t exterior_vertices = 0;
};

struct SeparatorOptions {
    double max_boundary_factor = 8.0;  // ceiling: factor * sqrt(n) boundary vertices
    uint32_t min_vertices = 3;         // below this: TooSmall
};

/// Balanced cycle separator: BFS-level fundamental cycle on a stellation of
/// g. Both open sides hold at most 2n/3 vertices (hard assertion); the
/// boundary size is checked against the configured ceiling and fails loudly
/// when exceeded.
SeparatorResult cycle_separator(const PlanarGraph& g, SeparatorOptions opt = {});

/// Splits g along the separator: side graphs share exactly the boundary
/// vertices, and every edge of g lands in exactly one side.
struct SplitGraphResult {
    SubgraphResult interior;
    SubgraphResult exterior;
};

SplitGraphResult split_graph(const PlanarGraph& g, const SeparatorResult& sep);

} // namespace pmcb

#endif
