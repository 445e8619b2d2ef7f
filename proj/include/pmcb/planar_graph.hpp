#ifndef PMCB_PLANAR_GRAPH_HPP
#define PMCB_PLANAR_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pmcb/error.hpp"
#include "pmcb/geometry.hpp"

namespace pmcb {

constexpr uint32_t kNone = UINT32_MAX;

struct EdgeRec {
    uint32_t u = 0;
    uint32_t v = 0;
    uint64_t w = 0;
};

/// One face of the embedding. `darts` is the boundary walk with the face on
/// the left of every dart.
struct Face {
    std::vector<uint32_t> darts;
    bool is_external = false;
    uint32_t component = 0;
};

/// Plane embedded multigraph with a rotation system. Immutable once built.
///
/// Darts: edge e contributes darts 2e (u->v) and 2e+1 (v->u). The rotation
/// at each vertex lists outgoing darts in counterclockwise order.
class PlanarGraph {
public:
    PlanarGraph() = default;

    uint32_t num_vertices() const { return n_; }
    uint32_t num_edges() const { return uint32_t(edges_.size()); }
    uint32_t num_darts() const { return uint32_t(edges_.size() * 2); }
    uint32_t num_faces() const { return uint32_t(faces_.size()); }
    uint32_t num_components() const { return num_components_; }

    const EdgeRec& edge(uint32_t e) const { return edges_[e]; }
    const std::vector<EdgeRec>& edges() const { return edges_; }

    uint32_t tail(uint32_t d) const { return (d & 1) ? edges_[d >> 1].v : edges_[d >> 1].u; }
    uint32_t head(uint32_t d) const { return (d & 1) ? edges_[d >> 1].u : edges_[d >> 1].v; }
    static uint32_t rev(uint32_t d) { return d ^ 1; }
    uint32_t other(uint32_t e, uint32_t x) const { return edges_[e].u == x ? edges_[e].v : edges_[e].u; }

    const std::vector<uint32_t>& rotation(uint32_t v) const { return rot_[v]; }
    uint32_t degree(uint32_t v) const { return uint32_t(rot_[v].size()); }
    uint32_t rot_index(uint32_t d) const { return rot_pos_[d]; }
    uint32_t rot_next(uint32_t d) const {
        const auto& r = rot_[tail(d)];
        uint32_t i = rot_pos_[d] + 1;
        return r[i == r.size() ? 0 : i];
    }
    uint32_t rot_prev(uint32_t d) const {
        const auto& r = rot_[tail(d)];
        uint32_t i = rot_pos_[d];
        return r[i == 0 ? r.size() - 1 : i - 1];
    }

    /// Next dart of the face walk keeping the face on the left.
    uint32_t face_next(uint32_t d) const { return rot_prev(rev(d)); }
    uint32_t face_of(uint32_t d) const { return face_of_[d]; }
    const Face& face(uint32_t f) const { return faces_[f]; }
    const std::vector<Face>& faces() const { return faces_; }
    uint32_t face_left(uint32_t d) const { return face_of_[d]; }
    uint32_t face_right(uint32_t d) const { return face_of_[d ^ 1]; }

    uint32_t component_of(uint32_t v) const { return comp_of_[v]; }
    uint32_t external_face(uint32_t comp = 0) const { return external_face_[comp]; }

    bool has_coords() const { return !coords_.empty(); }
    const Coord& coord(uint32_t v) const { return coords_[v]; }
    const std::vector<Coord>& coords() const { return coords_; }

    /// Persistent vertex index, shared by all subgraphs of a root graph
    /// (1-based in files, contiguous on root graphs).
    uint32_t label(uint32_t v) const { return labels_[v]; }
    const std::vector<uint32_t>& labels() const { return labels_; }
    uint32_t edge_label(uint32_t e) const { return edge_labels_[e]; }
    const std::vector<uint32_t>& edge_labels() const { return edge_labels_; }

    bool is_connected() const { return num_components_ <= 1; }

    /// Total weight of all edges.
    uint64_t total_weight() const;

    friend PlanarGraph build_embedding(const std::vector<Coord>& points,
                                       const std::vector<EdgeRec>& weighted_edges);
    friend PlanarGraph assemble_plane_graph(uint32_t n, std::vector<EdgeRec> edges,
                                            std::vector<std::vector<uint32_t>> rotations,
                                            std::vector<Coord> coords,
                                            std::vector<uint32_t> labels,
                                            std::vector<uint32_t> edge_labels,
                                            std::vector<uint32_t> external_faces);

private:
    void finish_build(std::vector<uint32_t> external_faces);

    uint32_t n_ = 0;
    std::vector<EdgeRec> edges_;
    std::vector<Coord> coords_;
    std::vector<uint32_t> labels_;
    std::vector<uint32_t> edge_labels_;
    std::vector<std::vector<uint32_t>> rot_;
    std::vector<uint32_t> rot_pos_;
    std::vector<uint32_t> face_of_;
    std::vector<Face> faces_;
    std::vector<uint32_t> comp_of_;
    std::vector<uint32_t> external_face_;
    uint32_t num_components_ = 0;
};

/// Builds the embedding from straight-line coordinates: rotations by angular
/// sort, faces traced, Euler count validated per component, external faces
/// identified by walk orientation.
PlanarGraph build_embedding(const std::vector<Coord>& points,
                            const std::vector<EdgeRec>& weighted_edges);

/// Builds a plane multigraph from an explicit rotation system. Coordinates
/// and labels optional. If `external_faces` is empty and coordinates exist,
/// external faces are derived from walk orientation; otherwise they must be
/// supplied (one per component, identified after tracing).
PlanarGraph assemble_plane_graph(uint32_t n, std::vector<EdgeRec> edges,
                                 std::vector<std::vector<uint32_t>> rotations,
                                 std::vector<Coord> coords = {},
                                 std::vector<uint32_t> labels = {},
                                 std::vector<uint32_t> edge_labels = {},
                                 std::vector<uint32_t> external_faces = {});

/// Re-derives the face list of g (same walks as g.faces(); exposed so tests
/// can exercise the trace directly).
std::vector<Face> trace_faces(const PlanarGraph& g);

/// Dual multigraph: one vertex per face of g, one edge per edge of g.
struct DualGraph {
    PlanarGraph graph;                       // dual as a plane multigraph
    std::vector<uint32_t> primal_edge;       // dual edge -> primal edge (identity)
    std::vector<uint32_t> vertex_of_face;    // primal face -> dual vertex (identity)
    /// dual face -> primal vertex
    std::vector<uint32_t> primal_vertex_of_face;
};

DualGraph dual_graph(const PlanarGraph& g);

/// Simple planar graph obtained by splitting self-loops twice and one edge of
/// every parallel pair, weights split floor/ceil. `edge_origin[e]` gives the
/// originating multigraph edge.
struct Simplified {
    PlanarGraph graph;
    std::vector<uint32_t> edge_origin;
    std::vector<uint32_t> vertex_origin;     // kNone for subdivision vertices
};

Simplified simplify_multigraph(const PlanarGraph& multi);

/// Connected components in deterministic order (by smallest contained vertex
/// label). Each component graph keeps parent labels and edge labels.
struct ComponentSplit {
    std::vector<PlanarGraph> components;
    std::vector<std::vector<uint32_t>> vertex_map;  // component vertex -> parent vertex
    std::vector<std::vector<uint32_t>> edge_map;    // component edge -> parent edge
};

ComponentSplit connected_components(const PlanarGraph& g);

/// Subgraph induced by the kept edges and vertices (edge endpoints must be
/// kept). Rotations, coordinates and labels are inherited. External faces of
/// the result are computed combinatorially from the parent embedding by
/// peeling the containment structure of the removed material, so the result
/// agrees with the parent's geometry even without coordinates.
struct SubgraphResult {
    PlanarGraph graph;
    std::vector<uint32_t> vertex_map;   // sub vertex -> parent vertex
    std::vector<uint32_t> edge_map;     // sub edge -> parent edge
    std::vector<uint32_t> vertex_back;  // parent vertex -> sub vertex or kNone
    std::vector<uint32_t> edge_back;    // parent edge -> sub edge or kNone
};

SubgraphResult induced_subgraph(const PlanarGraph& g, const std::vector<char>& edge_keep,
                                const std::vector<char>& vertex_keep);

} // namespace pmcb

#endif
