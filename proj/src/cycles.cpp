#include "pmcb/cycles.hpp"

#include <algorithm>
#include <queue>

namespace pmcb {

namespace {

Cycle make_horton(const PlanarGraph& g, const LexSPT& t, uint32_t root, uint32_t e) {
    Cycle c;
    c.root = root;
    c.nontree_edge = e;
    c.edges.push_back(e);
    c.weight = g.edge(e).w;
    for (uint32_t x : {g.edge(e).u, g.edge(e).v}) {
        uint32_t v = x;
        while (v != root) {
            c.edges.push_back(t.parent_edge(v));
            v = t.parent(v);
        }
        c.weight += t.dist(x).w;
    }
    std::sort(c.edges.begin(), c.edges.end());
    return c;
}

void horton_for_root(const PlanarGraph& g, uint32_t root, std::vector<Cycle>& out) {
    LexSPT t = lex_sp_tree(g, root);
    for (uint32_t e = 0; e < g.num_edges(); ++e) {
        if (t.is_tree_edge(e)) continue;
        uint32_t a = g.edge(e).u, b = g.edge(e).v;
        if (a == b) continue;
        // simple iff the two tree paths share only the root
        if (a != root && b != root && t.first_edge(a) == t.first_edge(b)) continue;
        out.push_back(make_horton(g, t, root, e));
    }
}

} // namespace

std::vector<uint32_t> cycle_vertex_labels(const PlanarGraph& g,
                                          const std::vector<uint32_t>& edges) {
    std::vector<uint32_t> vs;
    vs.reserve(edges.size());
    for (uint32_t e : edges) {
        vs.push_back(g.label(g.edge(e).u));
        vs.push_back(g.label(g.edge(e).v));
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

std::vector<Cycle> horton_cycles(const PlanarGraph& g, const std::vector<uint32_t>& roots,
                                 ExecMode mode) {
    std::vector<std::vector<Cycle>> per_root(roots.size());
#ifdef _OPENMP
    if (mode == ExecMode::Parallel) {
        #pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < long(roots.size()); ++i)
            horton_for_root(g, roots[i], per_root[i]);
    } else
#endif
    {
        (void)mode;
        for (size_t i = 0; i < roots.size(); ++i) horton_for_root(g, roots[i], per_root[i]);
    }
    std::vector<Cycle> all;
    for (auto& v : per_root)
        for (auto& c : v) all.push_back(std::move(c));
    std::sort(all.begin(), all.end(),
              [&](const Cycle& a, const Cycle& b) { return cycle_order_less(g, a, b); });
    return all;
}

CycleBasis gf2_extract(const PlanarGraph& g, const std::vector<Cycle>& sorted_cycles,
                       uint32_t dim) {
    uint32_t m = g.num_edges();
    uint32_t words = (m + 63) / 64;
    std::vector<std::vector<uint64_t>> rows;   // reduced basis rows
    std::vector<uint32_t> pivot;               // pivot bit of each row
    CycleBasis out;
    std::vector<uint64_t> acc(words);
    for (const Cycle& c : sorted_cycles) {
        if (out.cycles.size() == dim) break;
        std::fill(acc.begin(), acc.end(), 0);
        for (uint32_t e : c.edges) acc[e >> 6] ^= 1ull << (e & 63);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (acc[pivot[r] >> 6] >> (pivot[r] & 63) & 1)
                for (uint32_t wI = 0; wI < words; ++wI) acc[wI] ^= rows[r][wI];
        }
        uint32_t p = kNone;
        for (uint32_t wI = 0; wI < words && p == kNone; ++wI)
            if (acc[wI]) p = (wI << 6) + uint32_t(__builtin_ctzll(acc[wI]));
        if (p == kNone) continue;  // dependent
        rows.push_back(acc);
        pivot.push_back(p);
        out.cycles.push_back(c);
    }
    if (out.cycles.size() != dim)
        fail(ErrorCode::InsufficientRank, "candidate cycles do not span the cycle space");
    return out;
}

std::vector<char> faces_inside(const PlanarGraph& g, const std::vector<uint32_t>& cycle_edges) {
    std::vector<char> on_cycle(g.num_edges(), 0);
    for (uint32_t e : cycle_edges) on_cycle[e] = 1;
    uint32_t comp = g.component_of(g.edge(cycle_edges[0]).u);
    std::vector<char> outside(g.num_faces(), 0);
    std::vector<uint32_t> stack{g.external_face(comp)};
    outside[g.external_face(comp)] = 1;
    while (!stack.empty()) {
        uint32_t f = stack.back();
        stack.pop_back();
        for (uint32_t d : g.face(f).darts) {
            if (on_cycle[d >> 1]) continue;
            uint32_t nf = g.face_of(d ^ 1);
            if (!outside[nf]) {
                outside[nf] = 1;
                stack.push_back(nf);
            }
        }
    }
    std::vector<char> inside(g.num_faces(), 0);
    for (uint32_t f = 0; f < g.num_faces(); ++f)
        if (!outside[f] && g.face(f).component == comp) inside[f] = 1;
    return inside;
}

GreedyResult greedy_mcb_region(const PlanarGraph& g, ExecMode mode) {
    if (!g.is_connected()) fail(ErrorCode::Disconnected, "greedy needs a connected graph");
    GreedyResult res;
    uint32_t f = g.num_faces();
    std::vector<uint32_t> roots(g.num_vertices());
    for (uint32_t v = 0; v < g.num_vertices(); ++v) roots[v] = v;
    std::vector<Cycle> cand = horton_cycles(g, roots, mode);

    res.nodes.push_back(GreedyRegionNode{});  // external region
    std::vector<uint32_t> region_of_face(f, 0);
    std::vector<uint32_t> node_of_region{0};  // region id -> node id
    uint32_t dim = g.num_edges() - g.num_vertices() + 1;

    std::vector<uint32_t> in_cnt, out_cnt;
    for (const Cycle& c : cand) {
        if (res.basis.cycles.size() == dim) break;
        std::vector<char> inside = faces_inside(g, c.edges);
        uint32_t regions = uint32_t(node_of_region.size());
        in_cnt.assign(regions, 0);
        out_cnt.assign(regions, 0);
        for (uint32_t fi = 0; fi < f; ++fi)
            (inside[fi] ? in_cnt : out_cnt)[region_of_face[fi]]++;
        uint32_t split_region = kNone;
        for (uint32_t r = 0; r < regions; ++r) {
            if (in_cnt[r] > 0 && out_cnt[r] > 0) {
                if (split_region != kNone)
                    fail(ErrorCode::Internal, "greedy accepted a crossing cycle");
                split_region = r;
            }
        }
        if (split_region == kNone) continue;

        uint32_t bidx = uint32_t(res.basis.cycles.size());
        uint32_t parent_node = node_of_region[split_region];
        uint32_t node = uint32_t(res.nodes.size());
        res.nodes.push_back(GreedyRegionNode{});
        res.nodes[node].parent = parent_node;
        res.nodes[node].basis_index = bidx;
        res.nodes[node].white_int_at_creation = in_cnt[split_region];
        res.nodes[node].white_ext_at_creation = out_cnt[split_region];
        // inside faces form the new region
        uint32_t new_region = regions;
        node_of_region.push_back(node);
        for (uint32_t fi = 0; fi < f; ++fi)
            if (inside[fi] && region_of_face[fi] == split_region) region_of_face[fi] = new_region;
        // children of the split node that lie inside C move under the new node
        auto& siblings = res.nodes[parent_node].children;
        std::vector<uint32_t> stay;
        for (uint32_t ch : siblings) {
            // a child region is inside C iff its defining cycle's faces are
            uint32_t probe = res.nodes[ch].probe_face;
            if (inside[probe]) {
                res.nodes[ch].parent = node;
                res.nodes[node].children.push_back(ch);
            } else {
                stay.push_back(ch);
            }
        }
        siblings = std::move(stay);
        siblings.push_back(node);
        // a probe face inside the new region, for later containment checks
        for (uint32_t fi = 0; fi < f; ++fi)
            if (region_of_face[fi] == new_region) { res.nodes[node].probe_face = fi; break; }

        res.basis.cycles.push_back(c);
        res.node_of_cycle.push_back(node);
    }
    if (res.basis.cycles.size() != dim)
        fail(ErrorCode::Internal, "greedy terminated before completing the basis");

    res.node_of_face.assign(f, kNone);
    std::vector<uint32_t> count(node_of_region.size(), 0);
    for (uint32_t fi = 0; fi < f; ++fi) {
        uint32_t node = node_of_region[region_of_face[fi]];
        count[region_of_face[fi]]++;
        res.nodes[node].unique_face = fi;
        res.node_of_face[fi] = node;
    }
    for (uint32_t r = 0; r < count.size(); ++r)
        if (count[r] != 1) fail(ErrorCode::Internal, "region without unique face");
    return res;
}

namespace {

std::vector<uint32_t> cycle_vertex_walk(const PlanarGraph& g, const Cycle& c) {
    // orders the cycle's vertices by walking its edges
    std::vector<std::vector<uint32_t>> adj;
    std::vector<uint32_t> verts;
    std::vector<uint32_t> local(g.num_vertices(), kNone);
    auto local_of = [&](uint32_t v) {
        if (local[v] == kNone) {
            local[v] = uint32_t(verts.size());
            verts.push_back(v);
            adj.emplace_back();
        }
        return local[v];
    };
    for (uint32_t e : c.edges) {
        adj[local_of(g.edge(e).u)].push_back(e);
        adj[local_of(g.edge(e).v)].push_back(e);
    }
    std::vector<uint32_t> walk;
    uint32_t v = verts[0];
    uint32_t prev_e = kNone;
    do {
        walk.push_back(v);
        uint32_t le = adj[local[v]][0] == prev_e ? adj[local[v]][1] : adj[local[v]][0];
        prev_e = le;
        v = g.other(le, v);
    } while (v != verts[0]);
    return walk;
}

} // namespace

bool check_isometric(const PlanarGraph& g, const Cycle& c) {
    std::vector<uint32_t> walk = cycle_vertex_walk(g, c);
    uint32_t k = uint32_t(walk.size());
    std::vector<uint64_t> pref(k + 1, 0);
    for (uint32_t i = 0; i < k; ++i) {
        // weight of edge between walk[i] and walk[i+1 mod k]
        uint32_t a = walk[i], b = walk[(i + 1) % k];
        uint64_t w = UINT64_MAX;
        for (uint32_t e : c.edges)
            if ((g.edge(e).u == a && g.edge(e).v == b) || (g.edge(e).u == b && g.edge(e).v == a))
                w = std::min(w, g.edge(e).w);
        pref[i + 1] = pref[i] + w;
    }
    uint64_t total = pref[k];
    for (uint32_t i = 0; i < k; ++i) {
        // plain Dijkstra from walk[i]
        std::vector<uint64_t> dist(g.num_vertices(), UINT64_MAX);
        std::priority_queue<std::pair<uint64_t, uint32_t>, std::vector<std::pair<uint64_t, uint32_t>>,
                            std::greater<>> pq;
        dist[walk[i]] = 0;
        pq.push({0, walk[i]});
        while (!pq.empty()) {
            auto [dw, u] = pq.top();
            pq.pop();
            if (dw != dist[u]) continue;
            for (uint32_t d : g.rotation(u)) {
                uint32_t v = g.head(d);
                uint64_t nd = dw + g.edge(d >> 1).w;
                if (nd < dist[v]) {
                    dist[v] = nd;
                    pq.push({nd, v});
                }
            }
        }
        for (uint32_t j = 0; j < k; ++j) {
            uint64_t arc = pref[j > i ? j : i] - pref[j > i ? i : j];
            uint64_t on_cycle = std::min(arc, total - arc);
            if (on_cycle != dist[walk[j]]) return false;
        }
    }
    return true;
}

bool check_nested(const PlanarGraph& g, const CycleBasis& basis) {
    std::vector<std::vector<char>> ins;
    ins.reserve(basis.cycles.size());
    for (const Cycle& c : basis.cycles) ins.push_back(faces_inside(g, c.edges));
    for (size_t i = 0; i < ins.size(); ++i) {
        for (size_t j = i + 1; j < ins.size(); ++j) {
            bool i_in_j = true, j_in_i = true, disjoint = true;
            for (uint32_t f = 0; f < g.num_faces(); ++f) {
                if (ins[i][f] && ins[j][f]) disjoint = false;
                if (ins[i][f] && !ins[j][f]) i_in_j = false;
                if (ins[j][f] && !ins[i][f]) j_in_i = false;
            }
            if (!(disjoint || i_in_j || j_in_i)) return false;
        }
    }
    return true;
}

} // namespace pmcb
