#include "pmcb/planar_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace pmcb {

uint64_t PlanarGraph::total_weight() const {
    uint64_t s = 0;
    for (const auto& e : edges_) s += e.w;
    return s;
}

namespace {

int128 walk_area2(const PlanarGraph& g, const std::vector<uint32_t>& darts) {
    int128 a = 0;
    for (uint32_t d : darts) {
        const Coord& p = g.coord(g.tail(d));
        const Coord& q = g.coord(g.head(d));
        a += int128(p.x) * q.y - int128(q.x) * p.y;
    }
    return a;
}

// Exact pairwise segment-crossing scan over a uniform grid. Used by
// build_embedding as a cheap plane-drawing check; skipped when the cell
// budget would make it quadratic (the Euler check below always runs).
bool segments_intersect(const Coord& a, const Coord& b, const Coord& c, const Coord& d) {
    auto on_seg = [](const Coord& p, const Coord& q, const Coord& r) {
        return orient(p, q, r) == 0 && std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4 && o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (on_seg(a, b, c) || on_seg(a, b, d) || on_seg(c, d, a) || on_seg(c, d, b)) return true;
    return false;
}

void check_no_crossings(const std::vector<Coord>& pts, const std::vector<EdgeRec>& edges) {
    if (edges.empty()) return;
    int64_t minx = INT64_MAX, miny = INT64_MAX, maxx = INT64_MIN, maxy = INT64_MIN;
    for (const auto& p : pts) {
        minx = std::min(minx, p.x); maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y); maxy = std::max(maxy, p.y);
    }
    double span = double(maxx - minx) + double(maxy - miny) + 1.0;
    double avg = span / (std::sqrt(double(edges.size())) + 1.0);
    int64_t cell = std::max<int64_t>(1, int64_t(avg));
    auto cell_of = [&](int64_t x, int64_t y) {
        return std::pair<int64_t, int64_t>((x - minx) / cell, (y - miny) / cell);
    };
    std::unordered_map<uint64_t, std::vector<uint32_t>> grid;
    size_t budget = 20'000'000;
    size_t used = 0;
    for (uint32_t e = 0; e < edges.size(); ++e) {
        Coord a = pts[edges[e].u], b = pts[edges[e].v];
        auto [cx0, cy0] = cell_of(std::min(a.x, b.x), std::min(a.y, b.y));
        auto [cx1, cy1] = cell_of(std::max(a.x, b.x), std::max(a.y, b.y));
        used += size_t(cx1 - cx0 + 1) * size_t(cy1 - cy0 + 1);
        if (used > budget) return;  // best effort only
        for (int64_t cx = cx0; cx <= cx1; ++cx)
            for (int64_t cy = cy0; cy <= cy1; ++cy)
                grid[uint64_t(cx) * 1000003u + uint64_t(cy)].push_back(e);
    }
    for (const auto& [key, list] : grid) {
        for (size_t i = 0; i < list.size(); ++i) {
            for (size_t j = i + 1; j < list.size(); ++j) {
                const EdgeRec& e1 = edges[list[i]];
                const EdgeRec& e2 = edges[list[j]];
                if (e1.u == e2.u || e1.u == e2.v || e1.v == e2.u || e1.v == e2.v) continue;
                if (segments_intersect(pts[e1.u], pts[e1.v], pts[e2.u], pts[e2.v]))
                    fail(ErrorCode::EulerViolation, "edges cross in the straight-line drawing");
            }
        }
    }
}

} // namespace

void PlanarGraph::finish_build(std::vector<uint32_t> external_faces) {
    uint32_t m = num_edges();
    rot_pos_.assign(2 * m, kNone);
    for (uint32_t v = 0; v < n_; ++v) {
        for (uint32_t i = 0; i < rot_[v].size(); ++i) {
            uint32_t d = rot_[v][i];
            if (d >= 2 * m || tail(d) != v || rot_pos_[d] != kNone)
                fail(ErrorCode::EulerViolation, "invalid rotation system");
            rot_pos_[d] = i;
        }
    }
    for (uint32_t d = 0; d < 2 * m; ++d)
        if (rot_pos_[d] == kNone) fail(ErrorCode::EulerViolation, "dart missing from rotation");

    // components, ordered by smallest contained label
    comp_of_.assign(n_, kNone);
    std::vector<uint32_t> order(n_);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return labels_[a] < labels_[b]; });
    num_components_ = 0;
    std::vector<uint32_t> stack;
    for (uint32_t s : order) {
        if (comp_of_[s] != kNone) continue;
        uint32_t c = num_components_++;
        comp_of_[s] = c;
        stack.push_back(s);
        while (!stack.empty()) {
            uint32_t v = stack.back();
            stack.pop_back();
            for (uint32_t d : rot_[v]) {
                uint32_t w = head(d);
                if (comp_of_[w] == kNone) {
                    comp_of_[w] = c;
                    stack.push_back(w);
                }
            }
        }
    }

    // face tracing: orbits of face_next, face on the left of each dart
    face_of_.assign(2 * m, kNone);
    faces_.clear();
    for (uint32_t d0 = 0; d0 < 2 * m; ++d0) {
        if (face_of_[d0] != kNone) continue;
        uint32_t f = uint32_t(faces_.size());
        faces_.push_back(Face{});
        Face& face = faces_.back();
        face.component = comp_of_[tail(d0)];
        uint32_t d = d0;
        do {
            face_of_[d] = f;
            face.darts.push_back(d);
            d = face_next(d);
        } while (d != d0);
    }
    // vertex-only components still have one (empty) face
    std::vector<uint32_t> comp_first_face(num_components_, kNone);
    std::vector<uint32_t> nK(num_components_, 0), mK(num_components_, 0), fK(num_components_, 0);
    for (uint32_t v = 0; v < n_; ++v) nK[comp_of_[v]]++;
    for (const auto& e : edges_) mK[comp_of_[e.u]]++;
    for (uint32_t f = 0; f < faces_.size(); ++f) fK[faces_[f].component]++;
    for (uint32_t c = 0; c < num_components_; ++c) {
        if (fK[c] == 0) {
            faces_.push_back(Face{{}, true, c});
            fK[c] = 1;
        }
    }
    for (uint32_t c = 0; c < num_components_; ++c) {
        if (int64_t(nK[c]) - int64_t(mK[c]) + int64_t(fK[c]) != 2)
            fail(ErrorCode::EulerViolation, "Euler face count violated: component " +
                                                std::to_string(c));
    }

    // external faces
    external_face_.assign(num_components_, kNone);
    for (uint32_t f = 0; f < faces_.size(); ++f)
        if (faces_[f].darts.empty()) external_face_[faces_[f].component] = f;
    if (!external_faces.empty()) {
        for (uint32_t f : external_faces) {
            if (f >= faces_.size()) fail(ErrorCode::EulerViolation, "bad external face id");
            faces_[f].is_external = true;
            if (external_face_[faces_[f].component] != kNone &&
                external_face_[faces_[f].component] != f)
                fail(ErrorCode::EulerViolation, "two external faces in one component");
            external_face_[faces_[f].component] = f;
        }
    } else if (has_coords()) {
        for (uint32_t f = 0; f < faces_.size(); ++f) {
            if (faces_[f].darts.empty()) continue;
            uint32_t c = faces_[f].component;
            if (fK[c] == 1 || walk_area2(*this, faces_[f].darts) < 0) {
                if (external_face_[c] != kNone && external_face_[c] != f)
                    fail(ErrorCode::EulerViolation, "ambiguous external face");
                external_face_[c] = f;
            }
        }
    }
    for (uint32_t c = 0; c < num_components_; ++c) {
        if (external_face_[c] == kNone) {
            if (has_coords())
                fail(ErrorCode::EulerViolation, "no external face for component");
            // combinatorial graph without a designation: provisional pick,
            // callers re-assemble once the outer face is known
            for (uint32_t f = 0; f < faces_.size(); ++f)
                if (faces_[f].component == c) {
                    external_face_[c] = f;
                    break;
                }
        }
        faces_[external_face_[c]].is_external = true;
    }
}

PlanarGraph assemble_plane_graph(uint32_t n, std::vector<EdgeRec> edges,
                                 std::vector<std::vector<uint32_t>> rotations,
                                 std::vector<Coord> coords, std::vector<uint32_t> labels,
                                 std::vector<uint32_t> edge_labels,
                                 std::vector<uint32_t> external_faces) {
    PlanarGraph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.coords_ = std::move(coords);
    g.rot_ = std::move(rotations);
    if (labels.empty()) {
        labels.resize(n);
        std::iota(labels.begin(), labels.end(), 1u);
    }
    g.labels_ = std::move(labels);
    if (edge_labels.empty()) {
        edge_labels.resize(g.edges_.size());
        std::iota(edge_labels.begin(), edge_labels.end(), 0u);
    }
    g.edge_labels_ = std::move(edge_labels);
    g.finish_build(std::move(external_faces));
    return g;
}

PlanarGraph build_embedding(const std::vector<Coord>& points,
                            const std::vector<EdgeRec>& weighted_edges) {
    uint32_t n = uint32_t(points.size());
    {
        std::vector<Coord> sorted = points;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            fail(ErrorCode::DuplicateVertex, "duplicate vertex coordinates");
    }
    for (const auto& e : weighted_edges) {
        if (e.u >= n || e.v >= n) fail(ErrorCode::EulerViolation, "edge endpoint out of range");
        if (e.u == e.v) fail(ErrorCode::EulerViolation, "self-loop in straight-line input");
    }
    check_no_crossings(points, weighted_edges);

    std::vector<std::vector<uint32_t>> rot(n);
    for (uint32_t e = 0; e < weighted_edges.size(); ++e) {
        rot[weighted_edges[e].u].push_back(2 * e);
        rot[weighted_edges[e].v].push_back(2 * e + 1);
    }
    for (uint32_t v = 0; v < n; ++v) {
        auto& r = rot[v];
        std::sort(r.begin(), r.end(), [&](uint32_t d1, uint32_t d2) {
            const EdgeRec& e1 = weighted_edges[d1 >> 1];
            const EdgeRec& e2 = weighted_edges[d2 >> 1];
            uint32_t h1 = (d1 & 1) ? e1.u : e1.v;
            uint32_t h2 = (d2 & 1) ? e2.u : e2.v;
            return angle_less(points[h1].x - points[v].x, points[h1].y - points[v].y,
                              points[h2].x - points[v].x, points[h2].y - points[v].y);
        });
        for (size_t i = 1; i < r.size(); ++i) {
            const EdgeRec& e1 = weighted_edges[r[i - 1] >> 1];
            const EdgeRec& e2 = weighted_edges[r[i] >> 1];
            uint32_t h1 = (r[i - 1] & 1) ? e1.u : e1.v;
            uint32_t h2 = (r[i] & 1) ? e2.u : e2.v;
            if (orient(points[v], points[h1], points[h2]) == 0 &&
                angle_half(points[h1].x - points[v].x, points[h1].y - points[v].y) ==
                    angle_half(points[h2].x - points[v].x, points[h2].y - points[v].y))
                fail(ErrorCode::EulerViolation, "overlapping edges at a vertex");
        }
    }
    return assemble_plane_graph(n, weighted_edges, std::move(rot), points);
}

std::vector<Face> trace_faces(const PlanarGraph& g) {
    std::vector<Face> out;
    std::vector<uint32_t> seen(g.num_darts(), kNone);
    for (uint32_t d0 = 0; d0 < g.num_darts(); ++d0) {
        if (seen[d0] != kNone) continue;
        Face f;
        f.component = g.component_of(g.tail(d0));
        uint32_t d = d0;
        do {
            seen[d] = 1;
            f.darts.push_back(d);
            d = g.face_next(d);
        } while (d != d0);
        out.push_back(std::move(f));
    }
    for (auto& f : out)
        f.is_external = g.face(g.face_of(f.darts[0])).is_external;
    return out;
}

DualGraph dual_graph(const PlanarGraph& g) {
    if (!g.is_connected()) fail(ErrorCode::Disconnected, "dual_graph requires a connected graph");
    DualGraph d;
    uint32_t m = g.num_edges();
    uint32_t f = g.num_faces();
    std::vector<EdgeRec> dedges(m);
    d.primal_edge.resize(m);
    for (uint32_t e = 0; e < m; ++e) {
        dedges[e] = EdgeRec{g.face_left(2 * e), g.face_left(2 * e + 1), g.edge(e).w};
        d.primal_edge[e] = e;
    }
    // dual rotation at a face vertex: dual darts in boundary-walk order. Dual
    // dart 2e is the crossing of primal dart 2e taken left-to-right, so it
    // leaves the face on the left of primal dart 2e.
    std::vector<std::vector<uint32_t>> rot(f);
    for (uint32_t fi = 0; fi < f; ++fi) {
        for (uint32_t pd : g.face(fi).darts) rot[fi].push_back(pd);
    }
    d.vertex_of_face.resize(f);
    std::iota(d.vertex_of_face.begin(), d.vertex_of_face.end(), 0u);
    d.graph = assemble_plane_graph(f, dedges, rot);
    // The dual of a connected plane graph has one face per primal vertex: a
    // dual face orbit encircles the common head of its darts read as primal
    // darts.
    uint32_t df = d.graph.num_faces();
    if (df != g.num_vertices())
        fail(ErrorCode::Internal, "dual face count mismatch");
    d.primal_vertex_of_face.assign(df, kNone);
    std::vector<char> vertex_used(g.num_vertices(), 0);
    for (uint32_t fi = 0; fi < df; ++fi) {
        const auto& darts = d.graph.face(fi).darts;
        uint32_t x = g.head(darts[0]);
        for (uint32_t dd : darts)
            if (g.head(dd) != x) fail(ErrorCode::Internal, "dual face darts disagree on vertex");
        if (vertex_used[x]) fail(ErrorCode::Internal, "dual face/vertex matching not injective");
        vertex_used[x] = 1;
        d.primal_vertex_of_face[fi] = x;
    }
    // canonical outer face: the one of the smallest-labelled primal vertex
    uint32_t best = 0;
    for (uint32_t fi = 1; fi < df; ++fi)
        if (g.label(d.primal_vertex_of_face[fi]) < g.label(d.primal_vertex_of_face[best]))
            best = fi;
    if (best != d.graph.external_face(0))
        d.graph = assemble_plane_graph(f, std::move(dedges), std::move(rot), {}, {}, {}, {best});
    return d;
}

Simplified simplify_multigraph(const PlanarGraph& multi) {
    Simplified out;
    uint32_t n = multi.num_vertices();
    uint32_t m = multi.num_edges();

    // Count multiplicities to decide which edges get subdivided: the first
    // copy of each parallel class is kept, later copies and all loops split.
    std::vector<char> need_split(m, 0);
    {
        std::unordered_set<uint64_t> seen;
        for (uint32_t e = 0; e < m; ++e) {
            uint32_t a = multi.edge(e).u, b = multi.edge(e).v;
            if (a == b) { need_split[e] = 1; continue; }
            uint64_t key = uint64_t(std::min(a, b)) << 32 | std::max(a, b);
            if (!seen.insert(key).second) need_split[e] = 1;
        }
    }

    uint32_t next_v = n;
    std::vector<EdgeRec> edges;
    std::vector<std::vector<uint32_t>> rot(n);
    out.edge_origin.clear();
    out.vertex_origin.resize(n);
    std::iota(out.vertex_origin.begin(), out.vertex_origin.end(), 0u);

    // darts of the new graph corresponding to old darts (for rotations)
    std::vector<uint32_t> first_dart(2 * m);
    auto add_edge = [&](uint32_t a, uint32_t b, uint64_t w, uint32_t origin) {
        uint32_t e = uint32_t(edges.size());
        edges.push_back(EdgeRec{a, b, w});
        out.edge_origin.push_back(origin);
        return e;
    };
    auto add_vertex = [&]() {
        uint32_t v = next_v++;
        rot.emplace_back();
        out.vertex_origin.push_back(kNone);
        return v;
    };

    for (uint32_t e = 0; e < m; ++e) {
        uint32_t a = multi.edge(e).u, b = multi.edge(e).v;
        uint64_t w = multi.edge(e).w;
        if (!need_split[e]) {
            uint32_t ne = add_edge(a, b, w, e);
            first_dart[2 * e] = 2 * ne;
            first_dart[2 * e + 1] = 2 * ne + 1;
        } else if (a != b) {
            // parallel copy: a - x - b, weights floor/ceil
            uint32_t x = add_vertex();
            uint32_t e1 = add_edge(a, x, w / 2, e);
            uint32_t e2 = add_edge(x, b, w - w / 2, e);
            rot[x] = {2 * e1 + 1, 2 * e2};
            first_dart[2 * e] = 2 * e1;
            first_dart[2 * e + 1] = 2 * e2 + 1;
        } else {
            // self-loop: a - x - y - a, canonical floor/ceil applied twice
            uint32_t x = add_vertex();
            uint32_t y = add_vertex();
            uint64_t w1 = w / 2, rest = w - w1;
            uint32_t e1 = add_edge(a, x, w1, e);
            uint32_t e2 = add_edge(x, y, rest / 2, e);
            uint32_t e3 = add_edge(y, a, rest - rest / 2, e);
            rot[x] = {2 * e1 + 1, 2 * e2};
            rot[y] = {2 * e2 + 1, 2 * e3};
            first_dart[2 * e] = 2 * e1;
            first_dart[2 * e + 1] = 2 * e3 + 1;
        }
    }
    for (uint32_t v = 0; v < n; ++v) {
        rot[v].reserve(multi.rotation(v).size());
        for (uint32_t d : multi.rotation(v)) rot[v].push_back(first_dart[d]);
    }
    // external faces: map via a surviving dart of each old external face
    std::vector<uint32_t> labels(next_v);
    std::iota(labels.begin(), labels.end(), 1u);

    PlanarGraph g = assemble_plane_graph(next_v, edges, rot, {}, std::move(labels), {}, {});
    // re-assemble with external faces matched to the old ones
    std::vector<uint32_t> ext;
    for (uint32_t c = 0; c < multi.num_components(); ++c) {
        uint32_t of = multi.external_face(c);
        if (multi.face(of).darts.empty()) {
            // vertex-only component stays vertex-only
            continue;
        }
        uint32_t nd = first_dart[multi.face(of).darts[0]];
        ext.push_back(g.face_of(nd));
    }
    std::vector<uint32_t> labels2(next_v);
    std::iota(labels2.begin(), labels2.end(), 1u);
    out.graph = assemble_plane_graph(next_v, std::move(edges), std::move(rot), {},
                                     std::move(labels2), {}, std::move(ext));
    return out;
}

ComponentSplit connected_components(const PlanarGraph& g) {
    ComponentSplit out;
    uint32_t nc = g.num_components();
    out.components.resize(nc);
    out.vertex_map.resize(nc);
    out.edge_map.resize(nc);
    std::vector<uint32_t> local(g.num_vertices());
    for (uint32_t c = 0; c < nc; ++c) {
        std::vector<uint32_t>& vmap = out.vertex_map[c];
        for (uint32_t v = 0; v < g.num_vertices(); ++v)
            if (g.component_of(v) == c) {
                local[v] = uint32_t(vmap.size());
                vmap.push_back(v);
            }
        std::vector<EdgeRec> edges;
        std::vector<uint32_t> elabels;
        std::vector<uint32_t>& emap = out.edge_map[c];
        std::vector<uint32_t> new_edge(g.num_edges(), kNone);
        for (uint32_t e = 0; e < g.num_edges(); ++e)
            if (g.component_of(g.edge(e).u) == c) {
                new_edge[e] = uint32_t(edges.size());
                edges.push_back(EdgeRec{local[g.edge(e).u], local[g.edge(e).v], g.edge(e).w});
                elabels.push_back(g.edge_label(e));
                emap.push_back(e);
            }
        std::vector<std::vector<uint32_t>> rot(vmap.size());
        std::vector<uint32_t> labels(vmap.size());
        std::vector<Coord> coords;
        if (g.has_coords()) coords.resize(vmap.size());
        for (uint32_t i = 0; i < vmap.size(); ++i) {
            uint32_t v = vmap[i];
            labels[i] = g.label(v);
            if (g.has_coords()) coords[i] = g.coord(v);
            for (uint32_t d : g.rotation(v))
                rot[i].push_back(2 * new_edge[d >> 1] + (d & 1));
        }
        PlanarGraph sub = assemble_plane_graph(uint32_t(vmap.size()), edges, rot, coords,
                                               labels, elabels, {});
        // external face carried over from the parent orbit (faces of one
        // component are untouched by removing the others)
        uint32_t pf = g.external_face(c);
        if (!g.face(pf).darts.empty()) {
            uint32_t pd = g.face(pf).darts[0];
            uint32_t want = sub.face_of(2 * new_edge[pd >> 1] + (pd & 1));
            if (want != sub.external_face(0))
                sub = assemble_plane_graph(uint32_t(vmap.size()), std::move(edges),
                                           std::move(rot), std::move(coords), std::move(labels),
                                           std::move(elabels), {want});
        }
        out.components[c] = std::move(sub);
    }
    return out;
}

namespace {

struct FaceUF {
    std::vector<uint32_t> parent;
    explicit FaceUF(uint32_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    uint32_t find(uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(uint32_t a, uint32_t b) {
        a = find(a); b = find(b);
        if (a != b) parent[a] = b;
    }
};

} // namespace

SubgraphResult induced_subgraph(const PlanarGraph& g, const std::vector<char>& edge_keep,
                                const std::vector<char>& vertex_keep) {
    SubgraphResult out;
    out.vertex_back.assign(g.num_vertices(), kNone);
    out.edge_back.assign(g.num_edges(), kNone);
    for (uint32_t v = 0; v < g.num_vertices(); ++v)
        if (vertex_keep[v]) {
            out.vertex_back[v] = uint32_t(out.vertex_map.size());
            out.vertex_map.push_back(v);
        }
    std::vector<EdgeRec> edges;
    std::vector<uint32_t> elabels;
    for (uint32_t e = 0; e < g.num_edges(); ++e)
        if (edge_keep[e]) {
            if (!vertex_keep[g.edge(e).u] || !vertex_keep[g.edge(e).v])
                fail(ErrorCode::Internal, "kept edge with dropped endpoint");
            out.edge_back[e] = uint32_t(edges.size());
            edges.push_back(EdgeRec{out.vertex_back[g.edge(e).u], out.vertex_back[g.edge(e).v],
                                    g.edge(e).w});
            elabels.push_back(g.edge_label(e));
            out.edge_map.push_back(e);
        }
    uint32_t sn = uint32_t(out.vertex_map.size());
    std::vector<std::vector<uint32_t>> rot(sn);
    std::vector<uint32_t> labels(sn);
    std::vector<Coord> coords;
    if (g.has_coords()) coords.resize(sn);
    for (uint32_t i = 0; i < sn; ++i) {
        uint32_t v = out.vertex_map[i];
        labels[i] = g.label(v);
        if (g.has_coords()) coords[i] = g.coord(v);
        for (uint32_t d : g.rotation(v))
            if (edge_keep[d >> 1]) rot[i].push_back(2 * out.edge_back[d >> 1] + (d & 1));
    }
    PlanarGraph sub = assemble_plane_graph(sn, edges, rot, coords, labels, elabels, {});

    // Determine external faces combinatorially: peel the containment
    // structure of sub components inside merged parent-face regions, starting
    // from the region holding the parent's external face.
    if (!g.is_connected()) fail(ErrorCode::Internal, "induced_subgraph needs a connected parent");
    FaceUF uf(g.num_faces());
    for (uint32_t e = 0; e < g.num_edges(); ++e)
        if (!edge_keep[e]) uf.unite(g.face_left(2 * e), g.face_left(2 * e + 1));

    // region class -> incident (component, orbit, via sub dart)
    std::unordered_map<uint32_t, std::vector<std::pair<uint32_t, uint32_t>>> incident;
    for (uint32_t sd = 0; sd < sub.num_darts(); ++sd) {
        uint32_t pe = out.edge_map[sd >> 1];
        uint32_t pd = 2 * pe + (sd & 1);
        uint32_t cls = uf.find(g.face_of(pd));
        incident[cls].emplace_back(sub.component_of(sub.tail(sd)), sub.face_of(sd));
    }
    // Shell-by-shell peeling: resolve components adjacent to known regions
    // (their orbit facing the region is outward), then mark the regions
    // behind their interior orbits as known.
    std::vector<uint32_t> ext(sub.num_components(), kNone);
    for (uint32_t f = 0; f < sub.num_faces(); ++f)
        if (sub.face(f).darts.empty()) ext[sub.face(f).component] = f;  // vertex-only
    uint32_t start = uf.find(g.external_face(0));
    std::unordered_set<uint32_t> region_seen{start};
    std::vector<uint32_t> frontier{start};
    // precompute: per sub face, the parent region classes behind it
    std::vector<std::vector<uint32_t>> regions_behind(sub.num_faces());
    for (uint32_t sd = 0; sd < sub.num_darts(); ++sd) {
        uint32_t pe = out.edge_map[sd >> 1];
        uint32_t pd = 2 * pe + (sd & 1);
        regions_behind[sub.face_of(sd)].push_back(uf.find(g.face_of(pd)));
    }
    std::vector<char> comp_resolved(sub.num_components(), 0);
    while (!frontier.empty()) {
        uint32_t cls = frontier.back();
        frontier.pop_back();
        auto it = incident.find(cls);
        if (it == incident.end()) continue;
        for (auto [comp, orbit] : it->second) {
            if (comp_resolved[comp]) continue;
            comp_resolved[comp] = 1;
            ext[comp] = orbit;
            // all other orbits of comp bound enclosed regions
            for (uint32_t f = 0; f < sub.num_faces(); ++f) {
                if (sub.face(f).component != comp || f == orbit) continue;
                for (uint32_t r : regions_behind[f])
                    if (region_seen.insert(r).second) frontier.push_back(r);
            }
        }
    }
    for (uint32_t c = 0; c < sub.num_components(); ++c)
        if (ext[c] == kNone) fail(ErrorCode::Internal, "unresolved external face in subgraph");

    bool matches = true;
    for (uint32_t c = 0; c < sub.num_components(); ++c)
        if (ext[c] != sub.external_face(c)) matches = false;
    if (!matches) {
        std::vector<std::vector<uint32_t>> rot2(sub.num_vertices());
        for (uint32_t v = 0; v < sub.num_vertices(); ++v) rot2[v] = sub.rotation(v);
        std::vector<uint32_t> extlist;
        for (uint32_t c = 0; c < sub.num_components(); ++c)
            if (!sub.face(ext[c]).darts.empty()) extlist.push_back(ext[c]);
        sub = assemble_plane_graph(sn, std::move(edges), std::move(rot2), std::move(coords),
                                   std::move(labels), std::move(elabels), std::move(extlist));
    }
    out.graph = std::move(sub);
    return out;
}

} // namespace pmcb
