#include "pmcb/mcb.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "pmcb/dual_forest.hpp"
#include "pmcb/separator.hpp"

namespace pmcb {

namespace {
thread_local McbRunStats g_stats;
}

const McbRunStats& last_run_stats() { return g_stats; }

uint32_t ImplicitTree::pos_of_label(uint32_t label) const {
    auto it = std::lower_bound(order_by_label.begin(), order_by_label.end(), label,
                               [&](uint32_t pos, uint32_t lab) { return verts[pos] < lab; });
    if (it == order_by_label.end() || verts[*it] != label)
        fail(ErrorCode::UnknownTriple, "vertex not in tree");
    return *it;
}

size_t ImplicitMcb::storage_bytes() const {
    size_t s = triples.size() * sizeof(ImplicitTriple) + regions.size() * sizeof(McbRegionNode) +
               node_of_triple.size() * 4 + node_of_face.size() * 4;
    for (const auto& t : trees) s += t.storage_bytes();
    return s;
}

namespace {

// ------------------------------------------------------------------
// run context and per-level results
// ------------------------------------------------------------------

struct LevelResult {
    std::vector<ImplicitTriple> basis;     // greedy order
    std::vector<McbRegionNode> nodes;      // node 0 = external region; faces local
    std::vector<uint32_t> node_of_triple;  // basis index -> node
    std::vector<uint32_t> node_of_face;    // local face -> leaf node
};

struct Ctx {
    McbOptions opt;
    std::vector<ImplicitTree> trees;
    const PlanarGraph* root = nullptr;
    std::vector<char> vj_label_mark;  // scratch, sized root n + 1
};

uint32_t register_tree(Ctx& ctx, const PlanarGraph& h, const LexSPT& t) {
    ImplicitTree rec;
    uint32_t n = h.num_vertices();
    rec.verts.resize(n);
    rec.parent_pos.resize(n);
    rec.parent_edge.resize(n);
    rec.depth.resize(n);
    std::vector<uint32_t> pos(n);
    for (uint32_t i = 0; i < n; ++i) pos[t.order()[i]] = i;
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t v = t.order()[i];
        rec.verts[i] = h.label(v);
        rec.depth[i] = t.depth(v);
        if (t.parent(v) == kNone) {
            rec.parent_pos[i] = kNone;
            rec.parent_edge[i] = kNone;
        } else {
            rec.parent_pos[i] = pos[t.parent(v)];
            rec.parent_edge[i] = h.edge_label(t.parent_edge(v));
        }
    }
    rec.order_by_label.resize(n);
    std::iota(rec.order_by_label.begin(), rec.order_by_label.end(), 0u);
    std::sort(rec.order_by_label.begin(), rec.order_by_label.end(),
              [&](uint32_t a, uint32_t b) { return rec.verts[a] < rec.verts[b]; });
    ctx.trees.push_back(std::move(rec));
    return uint32_t(ctx.trees.size() - 1);
}

std::vector<uint32_t> expand_triple_edges(const Ctx& ctx, const ImplicitTriple& tr) {
    const ImplicitTree& t = ctx.trees[tr.tree];
    const EdgeRec& e = ctx.root->edge(tr.edge);
    uint32_t pa = t.pos_of_label(e.u + 1);
    uint32_t pb = t.pos_of_label(e.v + 1);
    std::vector<uint32_t> edges{tr.edge};
    while (pa != pb) {
        if (t.depth[pa] >= t.depth[pb]) {
            edges.push_back(t.parent_edge[pa]);
            pa = t.parent_pos[pa];
        } else {
            edges.push_back(t.parent_edge[pb]);
            pb = t.parent_pos[pb];
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

// ------------------------------------------------------------------
// base case
// ------------------------------------------------------------------

LevelResult base_case(Ctx& ctx, const PlanarGraph& h) {
    g_stats.base_cases++;
    GreedyResult gr = greedy_mcb_region(h, ctx.opt.exec);
    LevelResult out;
    out.nodes.resize(gr.nodes.size());
    for (uint32_t i = 0; i < gr.nodes.size(); ++i) {
        out.nodes[i].parent = gr.nodes[i].parent;
        out.nodes[i].face = gr.nodes[i].unique_face;
        out.nodes[i].white_int_at_creation = gr.nodes[i].white_int_at_creation;
        out.nodes[i].white_ext_at_creation = gr.nodes[i].white_ext_at_creation;
        out.nodes[i].triple = gr.nodes[i].basis_index;
    }
    out.node_of_face = gr.node_of_face;
    out.node_of_triple = gr.node_of_cycle;

    std::unordered_map<uint32_t, uint32_t> tree_of_root;
    for (const Cycle& c : gr.basis.cycles) {
        auto it = tree_of_root.find(c.root);
        if (it == tree_of_root.end()) {
            LexSPT t = lex_sp_tree(h, c.root);
            it = tree_of_root.emplace(c.root, register_tree(ctx, h, t)).first;
        }
        ImplicitTriple tr;
        tr.tree = it->second;
        tr.edge = h.edge_label(c.nontree_edge);
        tr.w = c.weight;
        tr.len = c.length();
        out.basis.push_back(tr);
    }
    return out;
}

// ------------------------------------------------------------------
// the merge level
// ------------------------------------------------------------------

constexpr uint32_t kKindHorton = 0;
constexpr uint32_t kKindRec = 1;

struct Cand {
    uint64_t w;
    uint32_t len;
    uint32_t kind;
    uint32_t a;  // horton: boundary index; rec: comp index
    uint32_t b;  // horton: local edge; rec: node id
    uint32_t root_label, edge_label, tree_idx;
};

struct Comp {
    SubgraphResult sub;
    LevelResult res;
    bool side_exterior = false;
    uint32_t fj_face = kNone;
    uint32_t fj_node = kNone;
    std::vector<uint32_t> k2h;            // comp face -> level face or kNone
    std::vector<uint32_t> node_to_basis;  // node -> basis index (kNone external)
    std::vector<uint32_t> par, dep, tin, tout;
    std::vector<std::vector<uint32_t>> up;
    std::vector<uint8_t> cross, epassive, considered, accepted;
    std::vector<uint32_t> live_entry;
    std::vector<uint32_t> final_node;
    uint32_t lm = kNone;
    uint32_t first_mirror_p0 = kNone;
    uint32_t pbottom = kNone;

    bool is_anc(uint32_t a, uint32_t d) const {
        return tin[a] <= tin[d] && tout[d] <= tout[a];
    }
    uint32_t lca(uint32_t a, uint32_t b) const {
        if (is_anc(a, b)) return a;
        if (is_anc(b, a)) return b;
        uint32_t x = a;
        for (int i = int(up.size()) - 1; i >= 0; --i)
            if (up[i][x] != kNone && !is_anc(up[i][x], b)) x = up[i][x];
        return par[x];
    }
};

struct FaceEntry {
    uint32_t prev = kNone, next = kNone;
    uint32_t region = kNone;
    uint32_t slab = kNone;
    uint32_t payload = kNone;  // white: level face; black child: final node
    uint32_t succ = kNone;
    uint8_t kind = 0;  // 0 white, 1 black child, 2 outer
    bool alive = true;
};

struct RegionRec {
    uint32_t head = kNone;
    uint32_t count = 0;
    uint32_t white = 0;
    uint32_t node = 0;
    uint32_t outer = kNone;
};

struct PendingParent {
    uint32_t final_node;
    uint32_t comp;
    uint32_t kparent;  // parent node in the component's region tree
};

LevelResult merge_level(Ctx& ctx, const PlanarGraph& H, uint32_t depth);

struct MergeRun {
    Ctx& ctx;
    const PlanarGraph& H;
    SeparatorResult sep;
    std::vector<Comp> comps;
    std::vector<uint32_t> comp_of_edge, local_edge;
    std::vector<uint32_t> boundary_pos;
    uint32_t r = 0;

    std::vector<LexSPT> trees;
    std::vector<uint32_t> tree_idx;
    std::vector<std::vector<uint32_t>> rank;
    std::vector<DualForest> forests;
    std::vector<std::vector<uint32_t>> ttin, ttout;  // Euler times per root tree

    std::vector<FaceEntry> entries;
    std::vector<RegionRec> regions;
    std::vector<uint32_t> avert;
    uint32_t nslabs = 0;

    std::vector<McbRegionNode> fnodes;
    std::vector<ImplicitTriple> basis;
    std::vector<uint32_t> basis_node;
    std::vector<PendingParent> pending;

    std::vector<uint32_t> cstamp;  // class marking scratch
    uint32_t cstamp_id = 0;

    // instrument-only: faces covered by each entry (the entry's area)
    std::vector<std::vector<uint32_t>> dbg_area;

    MergeRun(Ctx& c, const PlanarGraph& h) : ctx(c), H(h) {}

    // ---------- slabs, entries, regions ----------
    uint32_t alloc_slab() {
        avert.resize(size_t(nslabs + 1) * r, kNone);
        return nslabs++;
    }
    uint32_t& slot(uint32_t slab, uint32_t root) { return avert[size_t(slab) * r + root]; }

    uint32_t new_entry(uint32_t region, uint8_t kind, uint32_t payload) {
        uint32_t id = uint32_t(entries.size());
        entries.push_back(FaceEntry{});
        entries[id].kind = kind;
        entries[id].payload = payload;
        entries[id].slab = alloc_slab();
        list_insert(region, id);
        return id;
    }
    void list_insert(uint32_t rg, uint32_t ent) {
        FaceEntry& e = entries[ent];
        RegionRec& reg = regions[rg];
        e.region = rg;
        if (reg.head == kNone) {
            e.prev = e.next = ent;
            reg.head = ent;
        } else {
            uint32_t h = reg.head;
            uint32_t t = entries[h].prev;
            e.next = h;
            e.prev = t;
            entries[t].next = ent;
            entries[h].prev = ent;
        }
        reg.count++;
        if (e.kind == 0) reg.white++;
    }
    void list_remove(uint32_t ent) {
        FaceEntry& e = entries[ent];
        RegionRec& reg = regions[e.region];
        if (e.next == ent) {
            reg.head = kNone;
        } else {
            entries[e.next].prev = e.prev;
            entries[e.prev].next = e.next;
            if (reg.head == ent) reg.head = e.next;
        }
        reg.count--;
        if (e.kind == 0) reg.white--;
    }
    void kill_entry(uint32_t ent, uint32_t successor) {
        list_remove(ent);
        entries[ent].alive = false;
        entries[ent].succ = successor;
    }
    uint32_t chase(uint32_t face) {
        uint32_t e = face;
        while (!entries[e].alive) e = entries[e].succ;
        uint32_t x = face;
        while (!entries[x].alive) {
            uint32_t nx = entries[x].succ;
            entries[x].succ = e;
            x = nx;
        }
        return e;
    }

    std::vector<uint32_t> entry_list(uint32_t rg, uint32_t skip1 = kNone,
                                     uint32_t skip2 = kNone) const {
        std::vector<uint32_t> out;
        uint32_t h = regions[rg].head;
        if (h == kNone) return out;
        uint32_t ent = h;
        do {
            if (ent != skip1 && ent != skip2) out.push_back(ent);
            ent = entries[ent].next;
        } while (ent != h);
        return out;
    }

    std::vector<uint32_t> delta_of(uint32_t rg) {
        std::vector<uint32_t> out;
        uint32_t slab = entries[regions[rg].head].slab;
        for (uint32_t u = 0; u < r; ++u)
            if (slot(slab, u) != kNone) out.push_back(u);
        return out;
    }

    // ---------- tree path membership ----------
    // w lies on the tree path from the root to target iff w is an ancestor of
    // target (or target itself); paths of the cycle are tree paths, so this
    // is the exact membership test under the tie-broken metric
    bool on_root_path(uint32_t root_idx, uint32_t w, uint32_t target) const {
        return ttin[root_idx][w] <= ttin[root_idx][target] &&
               ttin[root_idx][target] < ttout[root_idx][w];
    }

    // ---------- wedges ----------
    bool wedge_contains(uint32_t c, uint32_t r1, uint32_t l1, uint32_t r2, uint32_t l2) const {
        if (r1 == l1) fail(ErrorCode::DegenerateWedge, "zero wedge");
        uint32_t deg = H.degree(c);
        uint32_t base = H.rot_index(r1);
        auto off = [&](uint32_t d) { return (H.rot_index(d) + deg - base) % deg; };
        uint32_t o1 = off(l1);
        return off(r2) <= off(l2) && off(l2) <= o1;
    }

    uint32_t dart_to(uint32_t from, uint32_t edge) const {
        return H.edge(edge).u == from ? 2 * edge : 2 * edge + 1;
    }

    // ---------- delta sets ----------
    struct Delta {
        std::vector<uint32_t> on, inside, outside;
    };

    // side of the open boundary arc that ends at position i2, for the Horton
    // cycle (v_idx, e) whose interior-side elementary face next to e is f_uv
    bool arc_inside(uint32_t v_idx, uint32_t e, uint32_t f_uv, uint32_t i2) {
        uint32_t ea = H.edge(e).u, eb = H.edge(e).v;
        uint32_t v = sep.boundary[v_idx];
        uint32_t w = sep.boundary[i2];
        const SeparatorPiece& piece = sep.pieces[(i2 + r - 1) % r];
        uint32_t occ = piece.occ_out_end;
        uint32_t dart_vp = occ;                   // towards the face-walk CW predecessor
        uint32_t dart_vpp = H.rot_next(occ);      // towards the CW successor
        uint32_t dab = dart_to(ea, e);
        bool ab_cw = H.face_of(dab ^ 1) == f_uv;  // a->b on a clockwise walk of C

        if (w == v) {
            // arc ends at the cycle root: interior wedge between the two
            // cycle edges at v, from the arrival side to the departure side
            // of the clockwise walk
            uint32_t da = (ea == v) ? dart_to(v, e) : dart_to(v, trees[v_idx].first_edge(ea));
            uint32_t db = (eb == v) ? dart_to(v, e) : dart_to(v, trees[v_idx].first_edge(eb));
            uint32_t cw_in = ab_cw ? db : da;   // neighbour the walk arrives from
            uint32_t cw_out = ab_cw ? da : db;  // neighbour the walk departs to
            if (cw_in == cw_out) fail(ErrorCode::DegenerateWedge, "cycle pinched at root");
            return wedge_contains(v, cw_in, cw_out, dart_vp, dart_vpp);
        }
        bool on_a = ea != v && on_root_path(v_idx, w, ea);
        uint32_t path_end = on_a ? ea : eb;
        uint32_t up_dart = dart_to(w, trees[v_idx].parent_edge(w));
        uint32_t down_dart = (w == path_end)
                                 ? dart_to(w, e)
                                 : dart_to(w, trees[boundary_pos[w]].first_edge(path_end));
        uint32_t d_pe = dart_to(path_end, e);
        bool cw = H.face_of(d_pe ^ 1) == f_uv;  // P_{path_end} on a clockwise walk
        if (cw) return wedge_contains(w, up_dart, down_dart, dart_vp, dart_vpp);
        return wedge_contains(w, down_dart, up_dart, dart_vp, dart_vpp);
    }

    // geometric cross-check of the combinatorial delta classification,
    // active in instrumented runs on coordinate graphs
    void verify_delta_geometrically(const Delta& d, uint32_t v_idx, uint32_t e) {
        if (!H.has_coords()) return;
        // polygon of the cycle: root -> a, edge, b -> root
        uint32_t v = sep.boundary[v_idx];
        std::vector<uint32_t> poly;
        uint32_t a = H.edge(e).u, b = H.edge(e).v;
        for (uint32_t x = a; x != v; x = trees[v_idx].parent(x)) poly.push_back(x);
        poly.push_back(v);
        {
            std::vector<uint32_t> tail;
            for (uint32_t x = b; x != v; x = trees[v_idx].parent(x)) tail.push_back(x);
            std::reverse(tail.begin(), tail.end());
            poly.insert(poly.end(), tail.begin(), tail.end());
        }
        auto point_inside = [&](const Coord& p) {
            bool in = false;
            for (size_t i = 0; i < poly.size(); ++i) {
                Coord pa = H.coord(poly[i]);
                Coord pb = H.coord(poly[(i + 1) % poly.size()]);
                if ((pa.y > p.y) != (pb.y > p.y)) {
                    int o = orient(pa, pb, p);
                    if (pb.y > pa.y ? o > 0 : o < 0) in = !in;
                }
            }
            return in;
        };
        for (uint32_t m2 : d.inside)
            if (!point_inside(H.coord(sep.boundary[m2])))
                fail(ErrorCode::Internal, "delta set: inside vertex is geometrically outside");
        for (uint32_t m2 : d.outside)
            if (point_inside(H.coord(sep.boundary[m2])))
                fail(ErrorCode::Internal, "delta set: outside vertex is geometrically inside");
    }

    Delta delta_sets(uint32_t rg, uint32_t v_idx, uint32_t e, uint32_t f_uv) {
        Delta d;
        std::vector<uint32_t> members = delta_of(rg);
        uint32_t ea = H.edge(e).u, eb = H.edge(e).v;
        uint32_t v = sep.boundary[v_idx];
        std::vector<char> is_on(members.size(), 0);
        for (size_t i = 0; i < members.size(); ++i) {
            uint32_t u = sep.boundary[members[i]];
            if (u == v || on_root_path(v_idx, u, ea) || on_root_path(v_idx, u, eb)) {
                is_on[i] = 1;
                d.on.push_back(members[i]);
            }
        }
        if (d.on.empty()) fail(ErrorCode::Internal, "cycle root missing from its region");
        if (members.size() == d.on.size()) return d;
        std::vector<uint32_t> rest;
        for (size_t i = 0; i < members.size(); ++i)
            if (!is_on[i]) rest.push_back(members[i]);
        for (size_t k = 0; k < d.on.size(); ++k) {
            uint32_t i1 = d.on[k];
            uint32_t i2 = d.on[(k + 1) % d.on.size()];
            std::vector<uint32_t> arc;
            uint32_t hi = (i2 + r - i1) % r;
            if (hi == 0) hi = r;
            for (uint32_t m : rest) {
                uint32_t rel = (m + r - i1) % r;
                if (rel > 0 && rel < hi) arc.push_back(m);
            }
            if (arc.empty()) continue;
            bool inside = arc_inside(v_idx, e, f_uv, i2);
            for (uint32_t m : arc) (inside ? d.inside : d.outside).push_back(m);
        }
        return d;
    }

    // ---------- marking and contraction ----------
    void ensure_stamp(size_t need) {
        if (cstamp.size() < need) cstamp.resize(need + 64, 0);
    }

    uint32_t mark_and_contract(uint32_t root, const std::vector<uint32_t>& contract_entries,
                               uint32_t new_entry_id) {
        DualForest& F = forests[root];
        ensure_stamp(F.num_class_slots());
        ++cstamp_id;
        std::vector<uint32_t> classes;
        for (uint32_t ent : contract_entries) {
            uint32_t c = slot(entries[ent].slab, root);
            if (c == kNone) fail(ErrorCode::Internal, "missing class for entry");
            if (cstamp[c] != cstamp_id) {
                cstamp[c] = cstamp_id;
                classes.push_back(c);
            }
        }
        uint32_t survivor;
        if (classes.size() == 1) {
            survivor = classes[0];
            F.set_payload(survivor, new_entry_id);
            F.set_color(survivor, VertexColor::Black);
        } else {
            std::vector<uint32_t> eset;
            for (uint32_t c : classes) {
                uint32_t pe = F.parent_edge(c);
                if (pe == kNone) continue;
                uint32_t o = F.other_class(pe, c);
                if (cstamp[o] == cstamp_id) eset.push_back(pe);
            }
            survivor = F.contract_edges(eset, new_entry_id, VertexColor::Black);
        }
        slot(entries[new_entry_id].slab, root) = survivor;
        return survivor;
    }

    // ---------- crossing marks ----------
    void mark_crossing(uint32_t e) {
        uint32_t ci = comp_of_edge[e];
        if (ci == kNone) return;
        Comp& K = comps[ci];
        uint32_t le = local_edge[e];
        uint32_t n1 = K.res.node_of_face[K.sub.graph.face_of(2 * le)];
        uint32_t n2 = K.res.node_of_face[K.sub.graph.face_of(2 * le + 1)];
        uint32_t fj = K.fj_node;
        uint32_t a1 = K.lca(n1, n2);
        uint32_t x = a1;
        while (x != kNone && !K.is_anc(x, fj) && !K.cross[x]) {
            K.cross[x] = 1;
            x = K.par[x];
        }
        uint32_t a2 = K.lca(n1, fj);
        uint32_t a3 = K.lca(n2, fj);
        uint32_t stop = K.dep[a2] >= K.dep[a3] ? a2 : a3;
        uint32_t cur = K.pbottom;
        while (cur != kNone && K.dep[cur] > K.dep[stop]) {
            K.cross[cur] = 1;
            cur = K.par[cur];
        }
        K.pbottom = stop;
    }

    bool rec_state_passive(const Comp& K, uint32_t node) const {
        if (K.epassive[node]) return true;
        if (K.lm != kNone && !K.is_anc(K.lm, node)) return true;
        return false;
    }

    // ---------- horton insertion ----------
    void insert_horton(uint32_t v_idx, uint32_t e, uint64_t w, uint32_t len,
                       uint32_t tree_registry_idx) {
        DualForest& F = forests[v_idx];
        uint32_t fe = rank[v_idx][e];
        auto [ca, cb] = F.endpoints(fe);
        uint32_t rg = entries[F.payload(ca)].region;
        uint32_t outer_entry = regions[rg].outer;

        // interleaved search avoiding fe; the first side to exhaust is smaller
        ensure_stamp(F.num_class_slots());
        struct Frame { uint32_t cls, cur; };
        struct Walk {
            std::vector<Frame> stack;
            std::vector<uint32_t> seen;
            bool outer = false;
        } wk[2];
        uint32_t stamps[2] = {++cstamp_id, ++cstamp_id};
        uint32_t seeds[2] = {ca, cb};
        for (int s = 0; s < 2; ++s) {
            cstamp[seeds[s]] = stamps[s];
            wk[s].seen.push_back(seeds[s]);
            if (F.payload(seeds[s]) == outer_entry) wk[s].outer = true;
            uint32_t h = F.adj_head(seeds[s]);
            while (h != kNone && (h >> 1) == fe) h = F.adj_next(seeds[s], h);
            if (h != kNone) wk[s].stack.push_back(Frame{seeds[s], h});
        }
        auto advance = [&](uint32_t cls, uint32_t d) {
            uint32_t nx = F.adj_next(cls, d);
            while (nx != kNone && (nx >> 1) == fe) nx = F.adj_next(cls, nx);
            return nx;
        };
        auto step = [&](int s) -> bool {
            auto& W = wk[s];
            if (W.stack.empty()) return false;
            Frame& fr = W.stack.back();
            uint32_t d = fr.cur;
            fr.cur = advance(fr.cls, d);
            uint32_t nb = F.owner(d ^ 1);
            if (fr.cur == kNone) W.stack.pop_back();
            if (cstamp[nb] != stamps[s]) {
                cstamp[nb] = stamps[s];
                W.seen.push_back(nb);
                if (F.payload(nb) == outer_entry) W.outer = true;
                uint32_t h = F.adj_head(nb);
                while (h != kNone && (h >> 1) == fe) h = F.adj_next(nb, h);
                if (h != kNone) W.stack.push_back(Frame{nb, h});
            }
            return true;
        };
        int small;
        while (true) {
            if (!step(0)) { small = 0; break; }
            if (!step(1)) { small = 1; break; }
        }
        bool small_is_interior = !wk[small].outer;
        // owner side 0 of the forest edge corresponds to H.face_of(2e)
        bool a_in_small = (small == 0);
        bool a_interior = (a_in_small == small_is_interior);
        uint32_t f_uv = a_interior ? H.face_of(2 * e) : H.face_of(2 * e + 1);

        Delta dl = delta_sets(rg, v_idx, e, f_uv);
        if (ctx.opt.instrument) {
            verify_delta_geometrically(dl, v_idx, e);
            std::vector<uint32_t> ce{e};
            for (uint32_t x : {H.edge(e).u, H.edge(e).v})
                for (uint32_t vv = x; vv != sep.boundary[v_idx]; vv = trees[v_idx].parent(vv))
                    ce.push_back(trees[v_idx].parent_edge(vv));
            verify_lex_isometric(ce);
        }

        std::vector<uint32_t> small_entries;
        small_entries.reserve(wk[small].seen.size());
        for (uint32_t c : wk[small].seen) small_entries.push_back(F.payload(c));

        uint32_t node = uint32_t(fnodes.size());
        fnodes.push_back(McbRegionNode{});
        fnodes[node].parent = regions[rg].node;
        fnodes[node].triple = uint32_t(basis.size());

        uint32_t rg2 = uint32_t(regions.size());
        regions.push_back(RegionRec{});
        for (uint32_t ent : small_entries) {
            list_remove(ent);
            list_insert(rg2, ent);
        }
        uint32_t int_rg = small_is_interior ? rg2 : rg;
        uint32_t ext_rg = small_is_interior ? rg : rg2;
        uint32_t old_node = regions[rg].node;
        uint32_t old_outer = regions[rg].outer;
        regions[int_rg].node = node;
        regions[ext_rg].node = old_node;
        regions[ext_rg].outer = old_outer;
        regions[int_rg].outer = kNone;
        if (old_outer != kNone && entries[old_outer].region != ext_rg)
            fail(ErrorCode::Internal, "outer entry ended inside the new cycle");

        // black children that moved inside the cycle now hang off this node
        for (uint32_t ent : entry_list(int_rg))
            if (entries[ent].kind == 1) fnodes[entries[ent].payload].parent = node;

        fnodes[node].white_int_at_creation = regions[int_rg].white;
        fnodes[node].white_ext_at_creation = regions[ext_rg].white;
        if (regions[int_rg].white == 0 || regions[ext_rg].white == 0)
            fail(ErrorCode::Internal, "accepted cycle fails the split test");

        std::vector<uint32_t> int_list = entry_list(int_rg);
        std::vector<uint32_t> ext_list = entry_list(ext_rg);

        uint32_t f_r1 = new_entry(int_rg, 2, kNone);
        regions[int_rg].outer = f_r1;
        uint32_t f_r2 = new_entry(ext_rg, 1, node);
        if (ctx.opt.instrument) {
            dbg_union_area(f_r1, ext_list);
            dbg_union_area(f_r2, int_list);
        }

        for (uint32_t u : dl.inside) mark_and_contract(u, ext_list, f_r1);
        for (uint32_t u : dl.outside) mark_and_contract(u, int_list, f_r2);
        for (uint32_t ui : dl.on) {
            DualForest& FU = forests[ui];
            ensure_stamp(FU.num_class_slots());
            ++cstamp_id;
            bool mark_interior = int_list.size() <= ext_list.size();
            const std::vector<uint32_t>& side = mark_interior ? int_list : ext_list;
            std::vector<uint32_t> classes;
            for (uint32_t ent : side) {
                uint32_t c = slot(entries[ent].slab, ui);
                if (c == kNone) fail(ErrorCode::Internal, "missing class in case 3");
                if (cstamp[c] != cstamp_id) {
                    cstamp[c] = cstamp_id;
                    classes.push_back(c);
                }
            }
            uint32_t cross_e = kNone;
            bool multi = false;
            for (uint32_t c : classes) {
                FU.for_adjacent(c, [&](uint32_t d) {
                    uint32_t o = FU.owner(d ^ 1);
                    if (cstamp[o] != cstamp_id) {
                        if (cross_e != kNone && cross_e != (d >> 1)) multi = true;
                        cross_e = d >> 1;
                    }
                });
            }
            if (multi) {
#ifdef PMCB_DEBUG_CASE3
                {
                    FILE* fp = fopen("/tmp/fail_level.plg", "w");
                    std::string s = serialize_plg(to_plg(H));
                    fwrite(s.data(), 1, s.size(), fp);
                    fclose(fp);
                    fp = fopen("/tmp/fail_info.txt", "w");
                    fprintf(fp, "candidate v=%u e=%u (%u-%u) w=%llu\n", sep.boundary[v_idx], e,
                            H.edge(e).u, H.edge(e).v, (unsigned long long)H.edge(e).w);
                    fprintf(fp, "boundary:");
                    for (uint32_t b2 : sep.boundary) fprintf(fp, " %u", b2);
                    fprintf(fp, "\nbasis so far (%zu):\n", basis.size());
                    for (const auto& tr2 : basis) {
                        fprintf(fp, " tree_root=%u edge=%u w=%llu len=%u:",
                                ctx.trees[tr2.tree].root_label(), tr2.edge,
                                (unsigned long long)tr2.w, tr2.len);
                        for (uint32_t e2 : expand_triple_edges(ctx, tr2)) fprintf(fp, " %u", e2);
                        fprintf(fp, "\n");
                    }
                    fclose(fp);
                }
                fprintf(stderr, "case3 root=%u v=%u e=%u..%u marked_int=%d basis_size=%zu\n",
                        sep.boundary[ui], sep.boundary[v_idx], H.edge(e).u, H.edge(e).v,
                        int(mark_interior), basis.size());
                fprintf(stderr, " n=%u m=%u int_list:", H.num_vertices(), H.num_edges());
                for (uint32_t ent : int_list)
                    fprintf(stderr, " %u(k%d,p%u)", ent, int(entries[ent].kind),
                            entries[ent].payload);
                fprintf(stderr, " | ext_list:");
                for (uint32_t ent : ext_list)
                    fprintf(stderr, " %u(k%d,p%u)", ent, int(entries[ent].kind),
                            entries[ent].payload);
                fprintf(stderr, "\n deltas: on=");
                for (uint32_t x : dl.on) fprintf(stderr, "%u ", sep.boundary[x]);
                fprintf(stderr, "in=");
                for (uint32_t x : dl.inside) fprintf(stderr, "%u ", sep.boundary[x]);
                fprintf(stderr, "out=");
                for (uint32_t x : dl.outside) fprintf(stderr, "%u ", sep.boundary[x]);
                fprintf(stderr, "\n full region tree of root %u:\n", sep.boundary[ui]);
                for (uint32_t ent2 : entry_list(entries[FU.payload(classes[0])].region)) {
                    uint32_t c2 = slot(entries[ent2].slab, ui);
                    fprintf(stderr, "  ent %u kind %d payload %u cls %u:", ent2,
                            int(entries[ent2].kind), entries[ent2].payload, c2);
                    if (c2 != kNone)
                        FU.for_adjacent(c2, [&](uint32_t d) {
                            fprintf(stderr, " ->cls%u(e%u)", FU.owner(d ^ 1), d >> 1);
                        });
                    fprintf(stderr, "\n");
                }
#endif
                fail(ErrorCode::Internal, "multiple crossing edges in case 3");
            }
            if (cross_e == kNone) fail(ErrorCode::Internal, "no crossing edge in case 3");
            uint32_t int_end, ext_end;
            {
                auto [x, y] = FU.endpoints(cross_e);
                bool x_marked = cstamp[x] == cstamp_id;
                int_end = (x_marked == mark_interior) ? x : y;
                ext_end = int_end == x ? y : x;
            }
            FU.delete_edge(cross_e);
            uint32_t c1 = FU.create_class(f_r1, VertexColor::Black);
            FU.insert_edge(int_end, c1);
            slot(entries[f_r1].slab, ui) = c1;
            uint32_t c2 = FU.create_class(f_r2, VertexColor::Black);
            FU.insert_edge(ext_end, c2);
            slot(entries[f_r2].slab, ui) = c2;
        }

        // null-outs after the structural updates: boundary roots that left a
        // side lose their pointers there, once and for all
        for (uint32_t ent : int_list)
            for (uint32_t u : dl.outside) slot(entries[ent].slab, u) = kNone;
        for (uint32_t ent : ext_list)
            for (uint32_t u : dl.inside) slot(entries[ent].slab, u) = kNone;

        ImplicitTriple tr;
        tr.tree = tree_registry_idx;
        tr.edge = H.edge_label(e);
        tr.w = w;
        tr.len = len;
        basis.push_back(tr);
        basis_node.push_back(node);
        g_stats.accepted_horton++;
        mark_crossing(e);
    }

    // ---------- recursive cycles ----------

    // collect the faces of one frontier subtree: accepted nodes contribute
    // their black entry, untouched active nodes their unique face (and turn
    // passive)
    void collect_subtree(Comp& K, uint32_t x, std::vector<uint32_t>& out) {
        if (K.accepted[x]) {
            out.push_back(K.live_entry[x]);
            return;
        }
        if (K.epassive[x]) fail(ErrorCode::Internal, "passive node inside a live frontier");
        if (K.cross[x]) fail(ErrorCode::Internal, "cross node inside an accepted cycle");
        uint32_t kf = K.res.nodes[x].face;
        uint32_t hf = K.k2h[kf];
        if (hf == kNone) fail(ErrorCode::Internal, "frontier face has no unique level face");
        uint32_t ent = chase(hf);
        if (!entries[ent].alive || entries[ent].kind != 0 || entries[ent].payload != hf)
            fail(ErrorCode::Internal, "frontier face is not a live white entry");
        out.push_back(ent);
        K.epassive[x] = 1;
        for (uint32_t ch : children_of(K, x)) collect_subtree(K, ch, out);
    }

    std::vector<std::vector<std::vector<uint32_t>>> comp_children_cache_;
    const std::vector<uint32_t>& children_of(const Comp& K, uint32_t x) const {
        size_t ci = size_t(&K - comps.data());
        return comp_children_cache_[ci][x];
    }

    // instrument-only: an accepted cycle must be lex-isometric, or the
    // dual-tree machinery has no right to work
    void verify_lex_isometric(const std::vector<uint32_t>& local_edges) {
        std::vector<uint32_t> vs;
        for (uint32_t e : local_edges) {
            vs.push_back(H.edge(e).u);
            vs.push_back(H.edge(e).v);
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        std::vector<char> on_c(H.num_edges(), 0);
        for (uint32_t e : local_edges) on_c[e] = 1;
        for (uint32_t u : vs) {
            LexSPT t = lex_sp_tree(H, u);
            for (uint32_t v : vs) {
                for (uint32_t x = v; x != u; x = t.parent(x)) {
                    if (!on_c[t.parent_edge(x)]) {
#ifdef PMCB_DEBUG_CASE3
                        fprintf(stderr,
                                "NON-ISOMETRIC accepted cycle: pair labels (%u,%u), edges:",
                                H.label(u), H.label(v));
                        for (uint32_t e : local_edges) fprintf(stderr, " %u", H.edge_label(e));
                        fprintf(stderr, "\n");
#endif
                        fail(ErrorCode::Internal, "accepted cycle is not lex-isometric");
                    }
                }
            }
        }
    }

    // instrument-only: entry areas for the from-scratch rebuild
    void dbg_init_areas() {
        dbg_area.resize(entries.size());
        for (uint32_t f = 0; f < H.num_faces(); ++f) dbg_area[f] = {f};
    }
    void dbg_union_area(uint32_t target, const std::vector<uint32_t>& parts) {
        if (dbg_area.empty()) return;
        dbg_area.resize(entries.size());
        for (uint32_t p : parts)
            dbg_area[target].insert(dbg_area[target].end(), dbg_area[p].begin(),
                                    dbg_area[p].end());
    }

    // instrumented runs: rebuild every contracted tree from scratch and
    // compare, and recheck the pruned views and region bookkeeping
    void validate_structures() {
        g_stats.instrument_checks++;
        uint32_t F = H.num_faces();
        std::vector<uint32_t> ent_of(F);
        for (uint32_t f = 0; f < F; ++f) ent_of[f] = chase(f);

        // exact per-root quotient rebuild from entry areas: within each region
        // containing the root, the forest tree must equal the quotient of the
        // static dual tree by the entry partition (compared as adjacency
        // pairs, since case-3 link edges carry fresh ids); globally, a static
        // dual edge is alive iff exactly one such region separates its faces
        dbg_area.resize(entries.size());
        std::vector<uint32_t> owner_entry(F, kNone);
        std::vector<std::vector<uint32_t>> region_entries;
        std::vector<uint32_t> live_regions;
        for (uint32_t rg = 0; rg < regions.size(); ++rg) {
            if (regions[rg].head == kNone) continue;
            live_regions.push_back(rg);
            region_entries.push_back(entry_list(rg));
        }
        std::vector<uint32_t> split_count;
        for (uint32_t u = 0; u < r; ++u) {
            const DualForest& FU = forests[u];
            split_count.assign(H.num_edges(), 0);
            for (size_t ri = 0; ri < live_regions.size(); ++ri) {
                const std::vector<uint32_t>& ents = region_entries[ri];
                if (slot(entries[ents[0]].slab, u) == kNone) continue;
                std::fill(owner_entry.begin(), owner_entry.end(), kNone);
                size_t covered = 0;
                for (uint32_t ent : ents)
                    for (uint32_t f : dbg_area[ent]) {
                        if (owner_entry[f] != kNone)
                            fail(ErrorCode::Internal, "entry areas overlap");
                        owner_entry[f] = ent;
                        ++covered;
                    }
                if (covered != F)
                    fail(ErrorCode::Internal, "entry areas do not cover all faces");
                std::set<std::pair<uint32_t, uint32_t>> expected, actual;
                for (uint32_t e = 0; e < H.num_edges(); ++e) {
                    uint32_t fe = rank[u][e];
                    if (fe == kNone) continue;
                    uint32_t oa = owner_entry[H.face_of(2 * e)];
                    uint32_t ob = owner_entry[H.face_of(2 * e + 1)];
                    if (oa != ob) {
                        expected.insert({std::min(oa, ob), std::max(oa, ob)});
                        split_count[e]++;
                    }
                }
                for (uint32_t ent : ents) {
                    uint32_t c = slot(entries[ent].slab, u);
                    FU.for_adjacent(c, [&](uint32_t d) {
                        uint32_t o = FU.payload(FU.owner(d ^ 1));
                        actual.insert({std::min(ent, o), std::max(ent, o)});
                    });
                }
                if (expected != actual)
                    fail(ErrorCode::Internal, "rebuild: contracted tree differs from quotient");
                if (actual.size() + 1 != ents.size() && !(ents.size() == 1 && actual.empty()))
                    fail(ErrorCode::Internal, "rebuild: region tree is not a tree");
            }
            for (uint32_t e = 0; e < H.num_edges(); ++e) {
                uint32_t fe = rank[u][e];
                if (fe == kNone) continue;
                if (FU.edge_alive(fe) && split_count[e] == 0)
                    fail(ErrorCode::Internal, "rebuild: alive edge splits no region");
            }
        }
        // region white counts and root-set coherence
        for (uint32_t rg = 0; rg < regions.size(); ++rg) {
            if (regions[rg].head == kNone) continue;
            uint32_t whites = 0;
            uint32_t slab0 = entries[regions[rg].head].slab;
            for (uint32_t ent : entry_list(rg)) {
                if (entries[ent].kind == 0) whites++;
                for (uint32_t u = 0; u < r; ++u)
                    if ((slot(entries[ent].slab, u) == kNone) != (slot(slab0, u) == kNone))
                        fail(ErrorCode::Internal, "inconsistent boundary sets inside a region");
            }
            if (whites != regions[rg].white)
                fail(ErrorCode::Internal, "stale white count");
        }
        for (uint32_t u = 0; u < r; ++u) {
            const DualForest& FU = forests[u];
            // classes must carry their entry payloads and colours
            for (uint32_t rg = 0; rg < regions.size(); ++rg) {
                if (regions[rg].head == kNone) continue;
                if (slot(entries[regions[rg].head].slab, u) == kNone) continue;
                for (uint32_t ent : entry_list(rg)) {
                    uint32_t c = slot(entries[ent].slab, u);
                    if (c == kNone || !FU.class_alive(c) || FU.payload(c) != ent)
                        fail(ErrorCode::Internal, "class/entry link broken");
                    bool black = entries[ent].kind != 0;
                    if ((FU.color(c) == VertexColor::Black) != black)
                        fail(ErrorCode::Internal, "class colour mismatch");
                }
            }
            // edge-by-edge equivalence with a from-scratch contraction,
            // restricted to faces visible from this root's regions
            for (uint32_t e = 0; e < H.num_edges(); ++e) {
                uint32_t fe = rank[u][e];
                if (fe == kNone) continue;
                uint32_t ea = ent_of[H.face_of(2 * e)];
                uint32_t eb = ent_of[H.face_of(2 * e + 1)];
                uint32_t ra = entries[ea].region, rb = entries[eb].region;
                bool ua = slot(entries[regions[ra].head].slab, u) != kNone;
                bool ub = slot(entries[regions[rb].head].slab, u) != kNone;
                if (!ua || !ub) continue;  // aggregated differently per root
                if (ra == rb) {
                    bool expect_alive = ea != eb;
                    if (FU.edge_alive(fe) != expect_alive)
                        fail(ErrorCode::Internal, "contracted tree differs from rebuild");
                    if (expect_alive) {
                        uint32_t ca = slot(entries[ea].slab, u);
                        uint32_t cb = slot(entries[eb].slab, u);
                        auto [x, y] = FU.endpoints(fe);
                        if (!((x == ca && y == cb) || (x == cb && y == ca)))
                            fail(ErrorCode::Internal, "contracted tree differs from rebuild");
                    }
                } else if (FU.edge_alive(fe)) {
                    fail(ErrorCode::Internal, "live dual edge crosses regions");
                }
            }
            FU.check_pruned_consistency();
        }
    }

    void handle_recursive(uint32_t ci, uint32_t node) {
        Comp& K = comps[ci];
        const ImplicitTriple& tr = K.res.basis[K.node_to_basis[node]];
        if (K.cross[node]) return;  // skipped
        if (rec_state_passive(K, node)) {
            // appended as-is: no structure updates
            uint32_t fn = uint32_t(fnodes.size());
            fnodes.push_back(McbRegionNode{});
            fnodes[fn].triple = uint32_t(basis.size());
            fnodes[fn].white_int_at_creation = K.res.nodes[node].white_int_at_creation;
            fnodes[fn].white_ext_at_creation = K.res.nodes[node].white_ext_at_creation;
            K.final_node[node] = fn;
            K.considered[node] = 1;
            pending.push_back(PendingParent{fn, ci, K.par[node]});
            basis.push_back(tr);
            basis_node.push_back(fn);
            g_stats.accepted_recursive++;
            return;
        }
        // active: locate the region through a face next to the defining edge
        K.considered[node] = 1;
        uint32_t hf = H.face_of(2 * find_local_edge(tr.edge));
        uint32_t ent = chase(hf);
        uint32_t rg = entries[ent].region;
        bool mirror = K.is_anc(node, K.fj_node);
        uint32_t threshold = mirror ? K.res.nodes[node].white_ext_at_creation
                                    : K.res.nodes[node].white_int_at_creation;
        if (!(regions[rg].white > threshold)) return;  // rejected

        // accepted: roll the far side of the cycle into one black face
        std::vector<uint32_t> collected;
        if (!mirror) {
            for (uint32_t ch : children_of(K, node)) collect_subtree(K, ch, collected);
            uint32_t kf = K.res.nodes[node].face;
            uint32_t hf2 = K.k2h[kf];
            if (hf2 == kNone) fail(ErrorCode::Internal, "active node face unmapped");
            uint32_t self_ent = chase(hf2);
            collected.push_back(self_ent);
        } else {
            // everything of the region outside the cycle: walk up to the zone
            // top collecting sibling frontiers, plus the region's outer entry
            uint32_t stop = K.lm;  // kNone means walk to the root
            uint32_t prev = node;
            uint32_t cur = K.par[node];
            while (cur != kNone && cur != stop) {
                if (K.accepted[cur]) fail(ErrorCode::Internal, "accepted ancestor in mirror walk");
                if (K.node_to_basis[cur] != kNone) {
                    // a real cycle node: its own unique face lies outside
                    uint32_t hf2 = K.k2h[K.res.nodes[cur].face];
                    if (hf2 == kNone) fail(ErrorCode::Internal, "mirror walk face unmapped");
                    collected.push_back(chase(hf2));
                    K.epassive[cur] = 1;
                } else {
                    // the component's external node: its face may be unmapped
                    uint32_t kf = K.res.nodes[cur].face;
                    uint32_t hf2 = kf == kNone ? kNone : K.k2h[kf];
                    if (hf2 != kNone) collected.push_back(chase(hf2));
                }
                for (uint32_t sib : children_of(K, cur))
                    if (sib != prev) collect_subtree(K, sib, collected);
                prev = cur;
                cur = K.par[cur];
            }
            if (regions[rg].outer != kNone) collected.push_back(regions[rg].outer);
            if (K.first_mirror_p0 == kNone) K.first_mirror_p0 = regions[rg].node;
            K.lm = node;
        }

        // structure: replace collected entries by one black face
        uint32_t fn = uint32_t(fnodes.size());
        fnodes.push_back(McbRegionNode{});
        fnodes[fn].triple = uint32_t(basis.size());
        K.final_node[node] = fn;
        K.accepted[node] = 1;

        uint32_t whites_collected = 0;
        for (uint32_t x : collected)
            if (entries[x].kind == 0) whites_collected++;
        uint32_t white_before = regions[rg].white;
        if (whites_collected == 0 || whites_collected >= white_before)
            fail(ErrorCode::Internal, "recursive split test inconsistent");

        uint8_t kind = mirror ? 2 : 1;
        std::vector<uint32_t> droots = delta_of(rg);
        uint32_t new_ent = new_entry(rg, kind, mirror ? kNone : fn);
        if (ctx.opt.instrument) dbg_union_area(new_ent, collected);
        // remove collected entries from the region, forward them to the new
        // one; their slabs stay readable for the contraction below
        for (uint32_t x : collected) kill_entry(x, new_ent);
        for (uint32_t u : droots) mark_and_contract(u, collected, new_ent);

        if (!mirror) {
            fnodes[fn].parent = regions[rg].node;
            fnodes[fn].white_int_at_creation = whites_collected;
            fnodes[fn].white_ext_at_creation = regions[rg].white;
            K.live_entry[node] = new_ent;
        } else {
            fnodes[fn].parent = regions[rg].node;
            fnodes[fn].white_int_at_creation = regions[rg].white;
            fnodes[fn].white_ext_at_creation = whites_collected;
            regions[rg].node = fn;
            regions[rg].outer = new_ent;
        }
        basis.push_back(tr);
        basis_node.push_back(fn);
        g_stats.accepted_recursive++;
    }

    std::vector<uint32_t> edge_of_label_;  // root edge label -> level edge
    uint32_t find_local_edge(uint32_t label) const {
        uint32_t e = edge_of_label_[label];
        if (e == kNone) fail(ErrorCode::Internal, "edge label not in this level");
        return e;
    }
};

// collected-entry contraction needs mark_and_contract's entries to be dead
// already? No: mark_and_contract only reads their slabs, which stay valid.

LevelResult merge_level(Ctx& ctx, const PlanarGraph& H, uint32_t depth) {
    g_stats.levels++;
    uint32_t n = H.num_vertices();
    uint32_t m = H.num_edges();
    uint32_t dim = m + 1 - n;
    if (n <= ctx.opt.base_case_threshold || dim == 0 || depth > 64) return base_case(ctx, H);

    MergeRun run(ctx, H);
    run.sep = cycle_separator(H, SeparatorOptions{ctx.opt.separator_factor, 3});
    g_stats.max_boundary = std::max<uint64_t>(g_stats.max_boundary, run.sep.boundary.size());
    SplitGraphResult parts = split_graph(H, run.sep);

    // recurse per connected component of each side
    run.comp_of_edge.assign(m, kNone);
    run.local_edge.assign(m, kNone);
    for (int side = 0; side < 2; ++side) {
        SubgraphResult& sg = side == 0 ? parts.interior : parts.exterior;
        ComponentSplit cs = connected_components(sg.graph);
        for (uint32_t c = 0; c < cs.components.size(); ++c) {
            Comp K;
            K.side_exterior = side == 1;
            // compose subgraph maps: component -> side -> level
            K.sub.graph = std::move(cs.components[c]);
            K.sub.vertex_map.resize(K.sub.graph.num_vertices());
            for (uint32_t v = 0; v < K.sub.graph.num_vertices(); ++v)
                K.sub.vertex_map[v] = sg.vertex_map[cs.vertex_map[c][v]];
            K.sub.edge_map.resize(K.sub.graph.num_edges());
            for (uint32_t e = 0; e < K.sub.graph.num_edges(); ++e) {
                uint32_t he = sg.edge_map[cs.edge_map[c][e]];
                K.sub.edge_map[e] = he;
                run.comp_of_edge[he] = uint32_t(run.comps.size());
                run.local_edge[he] = e;
            }
            run.comps.push_back(std::move(K));
        }
    }
    for (Comp& K : run.comps) K.res = merge_level(ctx, K.sub.graph, depth + 1);

    // boundary roots
    const std::vector<uint32_t>& VJ = run.sep.boundary;
    run.r = uint32_t(VJ.size());
    uint32_t r = run.r;
    run.boundary_pos.assign(n, kNone);
    for (uint32_t i = 0; i < r; ++i) run.boundary_pos[VJ[i]] = i;

    run.trees = lex_sp_forest(H, VJ, ctx.opt.exec);
    run.tree_idx.resize(r);
    run.ttin.assign(r, {});
    run.ttout.assign(r, {});
    for (uint32_t i = 0; i < r; ++i) {
        run.tree_idx[i] = register_tree(ctx, H, run.trees[i]);
        run.trees[i].drop_tables();
        // Euler times over the shortest path tree, for path membership
        const LexSPT& t = run.trees[i];
        std::vector<std::vector<uint32_t>> kids(n);
        for (uint32_t v = 0; v < n; ++v)
            if (t.parent(v) != kNone) kids[t.parent(v)].push_back(v);
        auto& tin = run.ttin[i];
        auto& tout = run.ttout[i];
        tin.assign(n, 0);
        tout.assign(n, 0);
        uint32_t timer = 0;
        std::vector<std::pair<uint32_t, size_t>> st{{VJ[i], 0}};
        tin[VJ[i]] = timer++;
        while (!st.empty()) {
            auto& [x, j] = st.back();
            if (j == kids[x].size()) {
                tout[x] = timer;
                st.pop_back();
                continue;
            }
            uint32_t ch = kids[x][j++];
            tin[ch] = timer++;
            st.push_back({ch, 0});
        }
    }

    // per-root dual forests over the faces of H
    uint32_t F = H.num_faces();
    run.forests.reserve(r);
    run.rank.assign(r, {});
    {
        std::vector<std::pair<uint32_t, uint32_t>> nontree;
        for (uint32_t i = 0; i < r; ++i) {
            nontree.clear();
            run.rank[i].assign(m, kNone);
            for (uint32_t e = 0; e < m; ++e) {
                if (run.trees[i].is_tree_edge(e)) continue;
                run.rank[i][e] = uint32_t(nontree.size());
                nontree.push_back({H.face_of(2 * e), H.face_of(2 * e + 1)});
            }
            run.forests.emplace_back(F, nontree, H.external_face(0));
        }
    }

    // region structure: one region holding every face as a white entry
    run.regions.push_back(RegionRec{});
    run.entries.resize(F);
    run.avert.assign(size_t(F) * r, kNone);
    run.nslabs = F;
    for (uint32_t f = 0; f < F; ++f) {
        run.entries[f].kind = 0;
        run.entries[f].payload = f;
        run.entries[f].slab = f;
        run.list_insert(0, f);
        for (uint32_t u = 0; u < r; ++u) run.slot(f, u) = f;  // class ids = face ids
    }
    run.regions[0].node = 0;
    run.regions[0].outer = H.external_face(0);
    run.fnodes.push_back(McbRegionNode{});  // external region node
    if (ctx.opt.instrument) run.dbg_init_areas();

    // per-root forest payloads point at the face entries (identity initially)
    for (uint32_t i = 0; i < r; ++i)
        for (uint32_t f = 0; f < F; ++f) run.forests[i].set_payload(f, f);

    // edge label -> level edge
    run.edge_of_label_.assign(ctx.root->num_edges(), kNone);
    for (uint32_t e = 0; e < m; ++e) run.edge_of_label_[H.edge_label(e)] = e;

    // component auxiliary info
    run.comp_children_cache_.resize(run.comps.size());
    for (uint32_t ci = 0; ci < run.comps.size(); ++ci) {
        Comp& K = run.comps[ci];
        uint32_t nn = uint32_t(K.res.nodes.size());
        K.par.resize(nn);
        K.dep.assign(nn, 0);
        auto& children = run.comp_children_cache_[ci];
        children.assign(nn, {});
        for (uint32_t x = 0; x < nn; ++x) {
            K.par[x] = K.res.nodes[x].parent;
            if (K.par[x] != kNone) children[K.par[x]].push_back(x);
        }
        // Euler tour
        K.tin.assign(nn, 0);
        K.tout.assign(nn, 0);
        uint32_t timer = 0;
        std::vector<std::pair<uint32_t, size_t>> st{{0u, 0u}};
        K.tin[0] = timer++;
        while (!st.empty()) {
            auto& [x, i] = st.back();
            if (i == children[x].size()) {
                K.tout[x] = timer;
                st.pop_back();
                continue;
            }
            uint32_t ch = children[x][i++];
            K.dep[ch] = K.dep[x] + 1;
            K.tin[ch] = timer++;
            st.push_back({ch, 0u});
        }
        uint32_t levels = 1;
        while ((1u << levels) < std::max(2u, nn)) ++levels;
        K.up.assign(levels, std::vector<uint32_t>(nn, kNone));
        K.up[0] = K.par;
        for (uint32_t l = 1; l < levels; ++l)
            for (uint32_t x = 0; x < nn; ++x)
                K.up[l][x] = K.up[l - 1][x] == kNone ? kNone : K.up[l - 1][K.up[l - 1][x]];
        K.cross.assign(nn, 0);
        K.epassive.assign(nn, 0);
        K.considered.assign(nn, 0);
        K.accepted.assign(nn, 0);
        K.live_entry.assign(nn, kNone);
        K.final_node.assign(nn, kNone);
        K.node_to_basis.assign(nn, kNone);
        for (uint32_t b = 0; b < K.res.basis.size(); ++b)
            K.node_to_basis[K.res.node_of_triple[b]] = b;

        // k2h: a component face equals a level face when the boundary walks
        // have the same length (component faces only merge level faces)
        const PlanarGraph& KG = K.sub.graph;
        K.k2h.assign(KG.num_faces(), kNone);
        for (uint32_t kf = 0; kf < KG.num_faces(); ++kf) {
            const Face& fc = KG.face(kf);
            if (fc.darts.empty()) continue;
            uint32_t hd = 2 * K.sub.edge_map[fc.darts[0] >> 1] + (fc.darts[0] & 1);
            uint32_t hf = H.face_of(hd);
            if (H.face(hf).darts.size() == fc.darts.size()) K.k2h[kf] = hf;
        }

        // f_J: the component face hosting the separator curve, found from a
        // curve piece corner at one of the component's boundary vertices
        K.fj_face = kNone;
        if (KG.num_edges() == 0) {
            K.fj_face = 0;  // single vertex: its one face
        } else {
            for (uint32_t p = 0; p < r && K.fj_face == kNone; ++p) {
                uint32_t hv = VJ[p];
                // occurrence dart at the piece's start vertex
                const SeparatorPiece& piece = run.sep.pieces[p];
                uint32_t occ = piece.occ_out_start;
                if (H.tail(occ) != hv) fail(ErrorCode::Internal, "piece start mismatch");
                // this component's local vertex, if the boundary vertex is here
                uint32_t lv = kNone;
                for (uint32_t v2 = 0; v2 < KG.num_vertices(); ++v2)
                    if (K.sub.vertex_map[v2] == hv) { lv = v2; break; }
                if (lv == kNone || KG.degree(lv) == 0) continue;
                // rotate clockwise from occ until an edge of this component
                uint32_t d = occ;
                for (uint32_t it = 0; it <= H.degree(hv); ++it) {
                    uint32_t ce = run.comp_of_edge[d >> 1] == ci ? run.local_edge[d >> 1] : kNone;
                    if (ce != kNone) {
                        uint32_t kd = 2 * ce + (d & 1);
                        K.fj_face = KG.face_of(kd);
                        break;
                    }
                    d = H.rot_prev(d);
                }
            }
            if (K.fj_face == kNone) fail(ErrorCode::Internal, "no curve corner for component");
        }
        K.fj_node = K.res.node_of_face[K.fj_face];
        K.pbottom = K.fj_node;
    }

    // candidate list
    std::vector<Cand> cands;
    for (uint32_t i = 0; i < r; ++i) {
        const LexSPT& t = run.trees[i];
        uint32_t v = VJ[i];
        for (uint32_t e = 0; e < m; ++e) {
            if (t.is_tree_edge(e)) continue;
            uint32_t a = H.edge(e).u, b = H.edge(e).v;
            if (a == b) continue;
            if (a != v && b != v && t.first_edge(a) == t.first_edge(b)) continue;
            Cand c;
            c.w = t.dist(a).w + t.dist(b).w + H.edge(e).w;
            c.len = uint32_t(t.dist(a).hops + t.dist(b).hops + 1);
            c.kind = kKindHorton;
            c.a = i;
            c.b = e;
            c.root_label = H.label(v);
            c.edge_label = H.edge_label(e);
            c.tree_idx = run.tree_idx[i];
            cands.push_back(c);
        }
    }
    g_stats.horton_candidates += cands.size();

    // recursive survivors: mark separator vertices and their descendants in
    // every referenced tree; a cycle survives iff neither endpoint of its
    // non-tree edge is marked
    {
        std::vector<char>& vjmark = ctx.vj_label_mark;
        if (vjmark.size() < size_t(ctx.root->num_vertices()) + 2)
            vjmark.assign(ctx.root->num_vertices() + 2, 0);
        for (uint32_t v : VJ) vjmark[H.label(v)] = 1;
        std::unordered_map<uint32_t, std::vector<char>> marked_cache;
        for (uint32_t ci = 0; ci < run.comps.size(); ++ci) {
            Comp& K = run.comps[ci];
            for (uint32_t b = 0; b < K.res.basis.size(); ++b) {
                const ImplicitTriple& tr = K.res.basis[b];
                auto it = marked_cache.find(tr.tree);
                if (it == marked_cache.end()) {
                    const ImplicitTree& T = ctx.trees[tr.tree];
                    std::vector<char> mk(T.verts.size(), 0);
                    for (uint32_t p = 0; p < T.verts.size(); ++p) {
                        mk[p] = vjmark[T.verts[p]] ||
                                (T.parent_pos[p] != kNone && mk[T.parent_pos[p]]);
                    }
                    it = marked_cache.emplace(tr.tree, std::move(mk)).first;
                }
                const ImplicitTree& T = ctx.trees[tr.tree];
                const EdgeRec& er = ctx.root->edge(tr.edge);
                if (it->second[T.pos_of_label(er.u + 1)] ||
                    it->second[T.pos_of_label(er.v + 1)])
                    continue;
                Cand c;
                c.w = tr.w;
                c.len = tr.len;
                c.kind = kKindRec;
                c.a = ci;
                c.b = K.res.node_of_triple[b];
                c.root_label = ctx.trees[tr.tree].root_label();
                c.edge_label = tr.edge;
                c.tree_idx = tr.tree;
                cands.push_back(c);
            }
        }
        for (uint32_t v : VJ) vjmark[H.label(v)] = 0;
    }

    // deterministic order: (w, len) first, then the vertex/edge label keys
    // computed lazily per tie group so expansions stay local
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        return std::tie(x.w, x.len) < std::tie(y.w, y.len);
    });
    {
        auto edges_of = [&](const Cand& c) {
            std::vector<uint32_t> ed;
            if (c.kind == kKindHorton) {
                const LexSPT& t = run.trees[c.a];
                ed.push_back(H.edge_label(c.b));
                for (uint32_t x : {H.edge(c.b).u, H.edge(c.b).v}) {
                    for (uint32_t vv = x; vv != VJ[c.a]; vv = t.parent(vv))
                        ed.push_back(H.edge_label(t.parent_edge(vv)));
                }
                std::sort(ed.begin(), ed.end());
            } else {
                const Comp& K = run.comps[c.a];
                ed = expand_triple_edges(ctx, K.res.basis[K.node_to_basis[c.b]]);
            }
            return ed;
        };
        size_t lo = 0;
        std::vector<std::pair<std::vector<uint32_t>, std::vector<uint32_t>>> keys;
        std::vector<uint32_t> order;
        while (lo < cands.size()) {
            size_t hi = lo + 1;
            while (hi < cands.size() && cands[hi].w == cands[lo].w &&
                   cands[hi].len == cands[lo].len)
                ++hi;
            if (hi - lo > 1) {
                keys.clear();
                order.clear();
                for (size_t i = lo; i < hi; ++i) {
                    std::vector<uint32_t> ed = edges_of(cands[i]);
                    std::vector<uint32_t> vl;
                    vl.reserve(ed.size());
                    for (uint32_t e : ed) {
                        vl.push_back(ctx.root->edge(e).u + 1);
                        vl.push_back(ctx.root->edge(e).v + 1);
                    }
                    std::sort(vl.begin(), vl.end());
                    vl.erase(std::unique(vl.begin(), vl.end()), vl.end());
                    keys.emplace_back(std::move(vl), std::move(ed));
                    order.push_back(uint32_t(i - lo));
                }
                std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
                    return keys[a] < keys[b];
                });
                std::vector<Cand> tmp(order.size());
                for (size_t i = 0; i < order.size(); ++i) tmp[i] = cands[lo + order[i]];
                std::copy(tmp.begin(), tmp.end(), cands.begin() + long(lo));
            }
            lo = hi;
        }
    }

    // the greedy pass
    for (const Cand& c : cands) {
        if (run.basis.size() == dim) break;
        if (c.kind == kKindHorton) {
            if (!run.forests[c.a].contains_edge(run.rank[c.a][c.b])) continue;
            run.insert_horton(c.a, c.b, c.w, c.len, run.tree_idx[c.a]);
        } else {
            run.handle_recursive(c.a, c.b);
        }
        if (ctx.opt.instrument) run.validate_structures();
    }
    if (run.basis.size() != dim)
        fail(ErrorCode::Internal, "merged greedy did not complete the basis");

    // unique faces: live regions own their single remaining white entry;
    // rolled-up faces resolve through the component structures
    LevelResult out;
    out.basis = std::move(run.basis);
    out.nodes = std::move(run.fnodes);
    out.node_of_triple = std::move(run.basis_node);
    // fix pending passive parents
    for (const PendingParent& p : run.pending) {
        const Comp& K = run.comps[p.comp];
        uint32_t kp = p.kparent;
        uint32_t target;
        if (kp == 0) {
            target = K.first_mirror_p0;
            if (target == kNone)
                fail(ErrorCode::Internal, "top-level passive without a mirror event");
        } else {
            target = K.final_node[kp];
            if (target == kNone) fail(ErrorCode::Internal, "passive parent never appended");
        }
        out.nodes[p.final_node].parent = target;
    }
    out.node_of_face.assign(F, kNone);
    for (uint32_t f = 0; f < F; ++f) {
        uint32_t ent = run.chase(f);
        uint32_t node;
        if (run.entries[ent].kind == 0 && run.entries[ent].payload == f) {
            node = run.regions[run.entries[ent].region].node;
        } else {
            // rolled: resolve via the owning component's leaf
            uint32_t ci = kNone, kf = kNone;
            for (uint32_t cj = 0; cj < run.comps.size() && ci == kNone; ++cj) {
                // find by a dart of f belonging to that component
                for (uint32_t d : H.face(f).darts) {
                    if (run.comp_of_edge[d >> 1] == cj) {
                        uint32_t ld = 2 * run.local_edge[d >> 1] + (d & 1);
                        uint32_t cand_kf = run.comps[cj].sub.graph.face_of(ld);
                        if (run.comps[cj].k2h[cand_kf] == f) {
                            ci = cj;
                            kf = cand_kf;
                            break;
                        }
                    }
                }
            }
            if (ci == kNone) fail(ErrorCode::Internal, "rolled face without component leaf");
            const Comp& K = run.comps[ci];
            uint32_t leaf = K.res.node_of_face[kf];
            if (leaf == 0 || K.final_node[leaf] == kNone) {
                // the component's external leaf: owned by the first mirror
                uint32_t tgt = leaf == 0 ? K.first_mirror_p0 : kNone;
                if (tgt == kNone) fail(ErrorCode::Internal, "rolled face without owner");
                node = tgt;
            } else {
                node = K.final_node[leaf];
            }
        }
        out.node_of_face[f] = node;
        if (out.nodes[node].face != kNone && out.nodes[node].face != f)
            fail(ErrorCode::Internal, "two faces claim one region");
        out.nodes[node].face = f;
    }
    for (uint32_t x = 0; x < out.nodes.size(); ++x)
        if (out.nodes[x].face == kNone) fail(ErrorCode::Internal, "region without unique face");
    return out;
}

} // namespace

// ------------------------------------------------------------------
// public interface
// ------------------------------------------------------------------

ImplicitMcb recursive_gmcb(const PlanarGraph& g, McbOptions opt) {
    if (!g.is_connected()) fail(ErrorCode::Disconnected, "recursive_gmcb needs a connected graph");
    g_stats = McbRunStats{};
    Ctx ctx;
    ctx.opt = opt;
    ctx.root = &g;
    LevelResult res = merge_level(ctx, g, 0);

    ImplicitMcb out;
    out.triples = std::move(res.basis);
    out.regions = std::move(res.nodes);
    out.node_of_triple = std::move(res.node_of_triple);
    out.node_of_face = std::move(res.node_of_face);
    // keep only referenced trees
    std::vector<uint32_t> remap(ctx.trees.size(), kNone);
    for (auto& t : out.triples) {
        if (remap[t.tree] == kNone) {
            remap[t.tree] = uint32_t(out.trees.size());
            out.trees.push_back(std::move(ctx.trees[t.tree]));
        }
        t.tree = remap[t.tree];
    }
    return out;
}

Cycle expand_cycle(const PlanarGraph& g, const ImplicitMcb& mcb, uint32_t triple_index) {
    if (triple_index >= mcb.triples.size())
        fail(ErrorCode::UnknownTriple, "triple index out of range");
    const ImplicitTriple& tr = mcb.triples[triple_index];
    const ImplicitTree& t = mcb.trees[tr.tree];
    const EdgeRec& e = g.edge(tr.edge);
    uint32_t pa = t.pos_of_label(g.label(e.u));
    uint32_t pb = t.pos_of_label(g.label(e.v));
    Cycle c;
    c.root = t.root_label() - 1;
    c.nontree_edge = tr.edge;
    c.edges.push_back(tr.edge);
    c.weight = g.edge(tr.edge).w;
    while (pa != pb) {
        uint32_t& p = t.depth[pa] >= t.depth[pb] ? pa : pb;
        c.weight += g.edge(t.parent_edge[p]).w;
        c.edges.push_back(t.parent_edge[p]);
        p = t.parent_pos[p];
    }
    std::sort(c.edges.begin(), c.edges.end());
    if (c.weight != tr.w) fail(ErrorCode::Internal, "expanded weight mismatch");
    if (c.edges.size() != tr.len) fail(ErrorCode::Internal, "expanded length mismatch");
    return c;
}

CycleBasis explicit_mcb(const PlanarGraph& g, const ImplicitMcb& mcb) {
    CycleBasis b;
    b.cycles.reserve(mcb.triples.size());
    for (uint32_t i = 0; i < mcb.triples.size(); ++i) b.cycles.push_back(expand_cycle(g, mcb, i));
    return b;
}

ImcbDocument to_imcb(const PlanarGraph& g, const ImplicitMcb& mcb) {
    ImcbDocument doc;
    doc.n = g.num_vertices();
    doc.m = g.num_edges();
    for (const auto& t : mcb.trees) {
        ImcbDocument::Tree td;
        td.root = t.root_label();
        td.vertices = t.verts;
        td.parent = t.parent_pos;
        td.parent_edge = t.parent_edge;
        doc.trees.push_back(std::move(td));
    }
    for (const auto& tr : mcb.triples) doc.triples.push_back({tr.tree, tr.edge, tr.w});
    for (uint32_t i = 0; i < mcb.regions.size(); ++i) {
        const auto& nd = mcb.regions[i];
        doc.regions.push_back({nd.parent, nd.face, nd.triple});
    }
    return doc;
}

ImplicitMcb from_imcb(const ImcbDocument& doc) {
    ImplicitMcb out;
    for (const auto& td : doc.trees) {
        ImplicitTree t;
        t.verts = td.vertices;
        t.parent_pos = td.parent;
        t.parent_edge = td.parent_edge;
        t.depth.assign(t.verts.size(), 0);
        for (uint32_t i = 0; i < t.verts.size(); ++i)
            if (t.parent_pos[i] != kNone) {
                if (t.parent_pos[i] >= i)
                    fail(ErrorCode::ParseError, "tree parents must precede children");
                t.depth[i] = t.depth[t.parent_pos[i]] + 1;
            }
        t.order_by_label.resize(t.verts.size());
        std::iota(t.order_by_label.begin(), t.order_by_label.end(), 0u);
        std::sort(t.order_by_label.begin(), t.order_by_label.end(),
                  [&](uint32_t a, uint32_t b) { return t.verts[a] < t.verts[b]; });
        out.trees.push_back(std::move(t));
    }
    for (const auto& td : doc.triples) out.triples.push_back({td.tree, td.edge, td.w, 0});
    out.regions.resize(doc.regions.size());
    out.node_of_triple.assign(doc.triples.size(), kNone);
    for (uint32_t i = 0; i < doc.regions.size(); ++i) {
        out.regions[i].parent = doc.regions[i].parent;
        out.regions[i].face = doc.regions[i].face;
        out.regions[i].triple = doc.regions[i].triple;
        if (doc.regions[i].triple != kNone) out.node_of_triple[doc.regions[i].triple] = i;
    }
    return out;
}

} // namespace pmcb
