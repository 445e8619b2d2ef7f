#include "pmcb/separator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace pmcb {

namespace {

// Stellation of g: one apex vertex inside every face, joined to each corner
// of the face walk. All faces of the result are triangles and g's edges keep
// their ids (apex edges follow).
struct Stellation {
    PlanarGraph t;
    uint32_t n_orig = 0;                  // vertices < n_orig are g's
    uint32_t m_orig = 0;                  // edges < m_orig are g's
    std::vector<uint32_t> apex_of_face;   // g face -> apex vertex in t
    std::vector<uint32_t> chord_corner;   // t edge -> g corner dart (apex edges only)
    std::vector<uint32_t> face_origin;    // t face -> g face
    uint32_t infinity_face = kNone;       // t face pinned to hold the point at infinity
};

Stellation stellate(const PlanarGraph& g) {
    Stellation s;
    s.n_orig = g.num_vertices();
    s.m_orig = g.num_edges();
    uint32_t nt = g.num_vertices() + g.num_faces();
    std::vector<EdgeRec> edges(g.edges());
    std::vector<std::vector<uint32_t>> rot(nt);
    s.apex_of_face.resize(g.num_faces());
    s.chord_corner.assign(g.num_edges(), kNone);

    // apex edges, one per corner (= face-walk dart)
    std::vector<uint32_t> corner_chord_dart(g.num_darts(), kNone);
    for (uint32_t f = 0; f < g.num_faces(); ++f) {
        uint32_t apex = g.num_vertices() + f;
        s.apex_of_face[f] = apex;
        for (uint32_t d : g.face(f).darts) {
            uint32_t e = uint32_t(edges.size());
            edges.push_back(EdgeRec{g.tail(d), apex, 0});
            s.chord_corner.push_back(d);
            corner_chord_dart[d] = 2 * e;       // dart vertex -> apex
            rot[apex].push_back(2 * e + 1);     // apex rotation in walk order
        }
    }
    for (uint32_t v = 0; v < g.num_vertices(); ++v) {
        for (uint32_t d : g.rotation(v)) {
            rot[v].push_back(d);
            // the corner between d and its rotation successor hosts the
            // chord to the apex of face_of(d)
            if (corner_chord_dart[d] != kNone) rot[v].push_back(corner_chord_dart[d]);
        }
    }
    s.t = assemble_plane_graph(nt, std::move(edges), std::move(rot));

    s.face_origin.assign(s.t.num_faces(), kNone);
    for (uint32_t f = 0; f < g.num_faces(); ++f)
        for (uint32_t d : g.face(f).darts) s.face_origin[s.t.face_of(d)] = f;
    // triangles incident to an apex through a chord dart also originate there
    for (uint32_t e = s.m_orig; e < s.t.num_edges(); ++e) {
        uint32_t gd = s.chord_corner[e];
        uint32_t f = g.face_of(gd);
        s.face_origin[s.t.face_of(2 * e)] = f;
        s.face_origin[s.t.face_of(2 * e + 1)] = f;
    }
    uint32_t ext = g.external_face(0);
    if (g.face(ext).darts.empty()) fail(ErrorCode::TooSmall, "degenerate external face");
    s.infinity_face = s.t.face_of(g.face(ext).darts[0]);
    return s;
}

struct BfsTree {
    std::vector<uint32_t> parent, parent_edge, depth;
};

BfsTree bfs_tree(const PlanarGraph& t, uint32_t root) {
    BfsTree b;
    b.parent.assign(t.num_vertices(), kNone);
    b.parent_edge.assign(t.num_vertices(), kNone);
    b.depth.assign(t.num_vertices(), kNone);
    std::queue<uint32_t> q;
    b.depth[root] = 0;
    q.push(root);
    while (!q.empty()) {
        uint32_t v = q.front();
        q.pop();
        for (uint32_t d : t.rotation(v)) {
            uint32_t w = t.head(d);
            if (b.depth[w] != kNone) continue;
            b.depth[w] = b.depth[v] + 1;
            b.parent[w] = v;
            b.parent_edge[w] = d >> 1;
            q.push(w);
        }
    }
    return b;
}

uint32_t farthest(const BfsTree& b) {
    uint32_t best = 0;
    for (uint32_t v = 0; v < b.depth.size(); ++v)
        if (b.depth[v] != kNone && b.depth[v] > b.depth[best]) best = v;
    return best;
}

} // namespace

SeparatorResult cycle_separator(const PlanarGraph& g, SeparatorOptions opt) {
    if (!g.is_connected()) fail(ErrorCode::Disconnected, "separator needs a connected graph");
    uint32_t n = g.num_vertices();
    if (n < opt.min_vertices) fail(ErrorCode::TooSmall, "graph below separator threshold");

    Stellation st = stellate(g);
    const PlanarGraph& t = st.t;

    // BFS root: midpoint of a double sweep, to keep fundamental cycles short
    BfsTree b0 = bfs_tree(t, 0);
    uint32_t x = farthest(b0);
    BfsTree b1 = bfs_tree(t, x);
    uint32_t y = farthest(b1);
    uint32_t mid = y;
    for (uint32_t i = 0, target = b1.depth[y] / 2; i < target; ++i) mid = b1.parent[mid];
    BfsTree bt = bfs_tree(t, mid);

    // binary lifting for LCA on the BFS tree
    uint32_t levels = 1;
    while ((1u << levels) < t.num_vertices()) ++levels;
    std::vector<std::vector<uint32_t>> up(levels, std::vector<uint32_t>(t.num_vertices(), kNone));
    up[0] = bt.parent;
    for (uint32_t i = 1; i < levels; ++i)
        for (uint32_t v = 0; v < t.num_vertices(); ++v)
            up[i][v] = up[i - 1][v] == kNone ? kNone : up[i - 1][up[i - 1][v]];
    auto lift = [&](uint32_t v, uint32_t k) {
        for (uint32_t i = 0; k; ++i, k >>= 1)
            if (k & 1) v = up[i][v];
        return v;
    };
    auto lca = [&](uint32_t a, uint32_t c) {
        if (bt.depth[a] < bt.depth[c]) std::swap(a, c);
        a = lift(a, bt.depth[a] - bt.depth[c]);
        if (a == c) return a;
        for (int i = int(levels) - 1; i >= 0; --i)
            if (up[i][a] != up[i][c]) { a = up[i][a]; c = up[i][c]; }
        return bt.parent[a];
    };

    // dual tree of the BFS tree, rooted at the infinity triangle
    uint32_t F = t.num_faces();
    std::vector<char> is_tree(t.num_edges(), 0);
    for (uint32_t v = 0; v < t.num_vertices(); ++v)
        if (bt.parent_edge[v] != kNone) is_tree[bt.parent_edge[v]] = 1;
    std::vector<uint32_t> dparent(F, kNone), dparent_edge(F, kNone), tin(F), tout(F);
    std::vector<uint32_t> dorder;
    {
        std::vector<uint32_t> stack{st.infinity_face};
        std::vector<char> seen(F, 0);
        seen[st.infinity_face] = 1;
        // iterative DFS for Euler times
        struct Frame { uint32_t f; size_t i; };
        std::vector<Frame> fr{{st.infinity_face, 0}};
        uint32_t timer = 0;
        tin[st.infinity_face] = timer++;
        dorder.push_back(st.infinity_face);
        while (!fr.empty()) {
            auto& [f, i] = fr.back();
            const auto& darts = t.face(f).darts;
            if (i == darts.size()) {
                tout[f] = timer;
                fr.pop_back();
                continue;
            }
            uint32_t d = darts[i++];
            if (is_tree[d >> 1]) continue;
            uint32_t nf = t.face_of(d ^ 1);
            if (seen[nf]) continue;
            seen[nf] = 1;
            dparent[nf] = f;
            dparent_edge[nf] = d >> 1;
            tin[nf] = timer++;
            dorder.push_back(nf);
            fr.push_back(Frame{nf, 0});
        }
        for (uint32_t f = 0; f < F; ++f)
            if (!seen[f]) fail(ErrorCode::Internal, "dual tree of BFS tree not spanning");
    }
    std::vector<uint32_t> sub_sz(F, 1);
    for (uint32_t i = F; i-- > 1;) {
        uint32_t f = dorder[i];
        if (dparent[f] != kNone) sub_sz[dparent[f]] += sub_sz[f];
    }
    std::vector<uint32_t> faces_by_tin(F);
    for (uint32_t f = 0; f < F; ++f) faces_by_tin[tin[f]] = f;

    // candidates: non-tree edges of t, scored by face balance of the
    // fundamental cycle (= dual subtree below the edge)
    struct Cand {
        uint32_t score;
        uint32_t edge;
        uint32_t child_face;
    };
    std::vector<Cand> cands;
    for (uint32_t e = 0; e < t.num_edges(); ++e) {
        if (is_tree[e]) continue;
        uint32_t fa = t.face_left(2 * e), fb = t.face_left(2 * e + 1);
        if (fa == fb) continue;
        uint32_t child = dparent_edge[fa] == e ? fa : fb;
        if (dparent_edge[child] != e) continue;  // not a dual tree edge: impossible
        uint32_t inside = sub_sz[child];
        cands.push_back(Cand{std::max(inside, F - inside), e, child});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return std::pair(a.score, a.edge) < std::pair(b.score, b.edge);
    });

    uint32_t ceiling = uint32_t(std::ceil(opt.max_boundary_factor * std::sqrt(double(n))));
    std::vector<uint32_t> stamp(t.num_vertices(), kNone);
    uint32_t stamp_id = 0;

    uint32_t best_edge = kNone, best_child = kNone, best_cost = kNone, best_r = kNone;
    uint32_t examined = 0;
    for (const Cand& c : cands) {
        if (examined >= 256 && best_edge != kNone) break;
        if (examined >= 4096) break;
        ++examined;
        uint32_t a = t.edge(c.edge).u, bb = t.edge(c.edge).v;
        uint32_t l = lca(a, bb);
        // cycle t-vertices
        ++stamp_id;
        uint32_t rg = 0;  // boundary vertices of g on the cycle
        for (uint32_t v : {a, bb}) {
            for (uint32_t w = v;; w = bt.parent[w]) {
                if (stamp[w] != stamp_id) {
                    stamp[w] = stamp_id;
                    if (w < st.n_orig) ++rg;
                }
                if (w == l) break;
            }
        }
        if (rg == 0 || rg > ceiling) continue;
        // exact interior g-vertex count: enumerate the smaller face side
        bool child_smaller = sub_sz[c.child_face] * 2 <= F;
        uint32_t cnt = 0;
        auto scan = [&](uint32_t from, uint32_t to) {
            for (uint32_t i = from; i < to; ++i) {
                uint32_t f = faces_by_tin[i];
                for (uint32_t d : t.face(f).darts) {
                    uint32_t v = t.tail(d);
                    if (v < st.n_orig && stamp[v] != stamp_id) {
                        stamp[v] = stamp_id;
                        ++cnt;
                    }
                }
            }
        };
        if (child_smaller) {
            scan(tin[c.child_face], tout[c.child_face]);
        } else {
            scan(0, tin[c.child_face]);
            scan(tout[c.child_face], F);
        }
        uint32_t inside_g = child_smaller ? cnt : (n - rg - cnt);
        uint32_t outside_g = n - rg - inside_g;
        if (3 * uint64_t(inside_g) > 2 * uint64_t(n) || 3 * uint64_t(outside_g) > 2 * uint64_t(n))
            continue;
        uint32_t cost = std::max(inside_g, outside_g);
        if (best_edge == kNone || std::tuple(cost, rg, c.edge) <
                                      std::tuple(best_cost, best_r, best_edge)) {
            best_edge = c.edge;
            best_child = c.child_face;
            best_cost = cost;
            best_r = rg;
        }
        if (examined >= 24 && best_edge != kNone) break;
    }
    if (best_edge == kNone)
        fail(ErrorCode::Internal, "no balanced fundamental-cycle separator found");
    if (best_r > ceiling)
        fail(ErrorCode::Internal, "separator exceeds boundary ceiling");

    // realize the chosen cycle: tree path a..lca..b plus the edge
    uint32_t a = t.edge(best_edge).u, bb = t.edge(best_edge).v;
    uint32_t l = lca(a, bb);
    std::vector<uint32_t> up_a, up_b;  // darts along the cycle
    std::vector<uint32_t> cyc_darts;   // directed darts forming the cycle
    for (uint32_t w = a; w != l; w = bt.parent[w]) {
        uint32_t e = bt.parent_edge[w];
        cyc_darts.push_back(t.edge(e).u == w ? 2 * e : 2 * e + 1);  // w -> parent
    }
    {
        std::vector<uint32_t> tmp;
        for (uint32_t w = bb; w != l; w = bt.parent[w]) {
            uint32_t e = bt.parent_edge[w];
            tmp.push_back(t.edge(e).u == w ? 2 * e + 1 : 2 * e);  // parent -> w
        }
        std::reverse(tmp.begin(), tmp.end());
        cyc_darts.insert(cyc_darts.end(), tmp.begin(), tmp.end());
        // close with best_edge: b -> a
        cyc_darts.push_back(t.edge(best_edge).u == bb ? 2 * best_edge : 2 * best_edge + 1);
    }
    // interior = dual subtree side of best_child (away from infinity)
    auto face_inside = [&](uint32_t f) {
        return tin[f] >= tin[best_child] && tin[f] < tout[best_child];
    };
    // orient clockwise: interior must sit to the right of every dart
    {
        uint32_t d0 = cyc_darts[0];
        if (face_inside(t.face_of(d0))) {
            // interior on the left: reverse
            std::reverse(cyc_darts.begin(), cyc_darts.end());
            for (auto& d : cyc_darts) d ^= 1;
        }
    }

    SeparatorResult res;
    std::vector<char> on_cycle_v(t.num_vertices(), 0);
    std::vector<char> on_cycle_e(t.num_edges(), 0);
    for (uint32_t d : cyc_darts) {
        on_cycle_v[t.tail(d)] = 1;
        on_cycle_e[d >> 1] = 1;
    }
    for (uint32_t d : cyc_darts) {
        if (face_inside(t.face_of(d)))
            fail(ErrorCode::Internal, "separator orientation inconsistent");
        if (!face_inside(t.face_of(d ^ 1)))
            fail(ErrorCode::Internal, "separator cycle does not bound its interior");
    }

    // boundary vertices in clockwise order and the pieces between them
    uint32_t k = uint32_t(cyc_darts.size());
    std::vector<uint32_t> gpos;  // positions in cyc_darts whose tail is a g vertex
    for (uint32_t i = 0; i < k; ++i)
        if (t.tail(cyc_darts[i]) < st.n_orig) gpos.push_back(i);
    if (gpos.empty()) fail(ErrorCode::Internal, "separator cycle avoids the graph");
    for (uint32_t i : gpos) res.boundary.push_back(t.tail(cyc_darts[i]));

    auto occurrence_out = [&](uint32_t piece_dart, bool at_end) -> uint32_t {
        // piece along a real g edge: the walk occurrence hugging it from the
        // interior-side face
        uint32_t d = piece_dart;  // g dart v_i -> v_{i+1}
        if (at_end) return g.rev(d);
        return g.rot_prev(d);
    };
    for (uint32_t pi = 0; pi < gpos.size(); ++pi) {
        uint32_t i0 = gpos[pi];
        uint32_t i1 = gpos[(pi + 1) % gpos.size()];
        SeparatorPiece piece{};
        uint32_t d0 = cyc_darts[i0];
        if ((d0 >> 1) < st.m_orig) {
            // single g edge
            piece.host_face = st.face_origin[t.face_of(d0 ^ 1)];
            piece.occ_out_start = occurrence_out(d0, false);
            piece.occ_out_end = occurrence_out(d0, true);
        } else {
            // chord chain v -> apex -> w: both darts are apex edges
            uint32_t d1 = cyc_darts[(i0 + 1) % k];
            if ((d1 >> 1) < st.m_orig) fail(ErrorCode::Internal, "broken chord chain");
            uint32_t c0 = st.chord_corner[d0 >> 1];
            uint32_t c1 = st.chord_corner[d1 >> 1];
            piece.host_face = g.face_of(c0);
            if (g.face_of(c1) != piece.host_face)
                fail(ErrorCode::Internal, "chord chain spans two faces");
            piece.occ_out_start = c0;
            piece.occ_out_end = c1;
        }
        (void)i1;
        res.pieces.push_back(piece);
    }

    // side assignments
    res.vertex_side.assign(n, Side::Exterior);
    for (uint32_t v = 0; v < n; ++v) {
        if (on_cycle_v[v]) {
            res.vertex_side[v] = Side::OnJ;
        } else {
            uint32_t d = t.rotation(v)[0];
            res.vertex_side[v] = face_inside(t.face_of(d)) ? Side::Interior : Side::Exterior;
        }
    }
    res.edge_side.assign(g.num_edges(), Side::Exterior);
    for (uint32_t e = 0; e < g.num_edges(); ++e) {
        if (on_cycle_e[e]) {
            res.edge_side[e] = Side::Exterior;  // pieces hug the interior side
        } else {
            res.edge_side[e] = face_inside(t.face_of(2 * e)) ? Side::Interior : Side::Exterior;
        }
    }
    res.face_side.assign(g.num_faces(), Side::Exterior);
    {
        std::vector<char> pierced(g.num_faces(), 0);
        for (const auto& p : res.pieces) pierced[p.host_face] = 1;
        for (uint32_t f = 0; f < g.num_faces(); ++f) {
            if (pierced[f]) {
                res.face_side[f] = Side::OnJ;
            } else {
                uint32_t tf = g.face(f).darts.empty() ? kNone : st.t.face_of(g.face(f).darts[0]);
                res.face_side[f] = (tf != kNone && face_inside(tf)) ? Side::Interior
                                                                    : Side::Exterior;
            }
        }
    }
    for (uint32_t v = 0; v < n; ++v) {
        if (res.vertex_side[v] == Side::Interior) res.interior_vertices++;
        if (res.vertex_side[v] == Side::Exterior) res.exterior_vertices++;
    }
    if (3 * uint64_t(res.interior_vertices) > 2 * uint64_t(n) ||
        3 * uint64_t(res.exterior_vertices) > 2 * uint64_t(n))
        fail(ErrorCode::Internal, "separator balance violated");
    return res;
}

SplitGraphResult split_graph(const PlanarGraph& g, const SeparatorResult& sep) {
    SplitGraphResult out;
    std::vector<char> vkeep(g.num_vertices()), ekeep(g.num_edges());
    for (int side = 0; side < 2; ++side) {
        Side want = side == 0 ? Side::Interior : Side::Exterior;
        for (uint32_t v = 0; v < g.num_vertices(); ++v)
            vkeep[v] = sep.vertex_side[v] == want || sep.vertex_side[v] == Side::OnJ;
        for (uint32_t e = 0; e < g.num_edges(); ++e) ekeep[e] = sep.edge_side[e] == want;
        (side == 0 ? out.interior : out.exterior) = induced_subgraph(g, ekeep, vkeep);
    }
    return out;
}

} // namespace pmcb
