#include "pmcb/dual_forest.hpp"

#include <algorithm>

namespace pmcb {

DualForest::DualForest(uint32_t num_vertices,
                       const std::vector<std::pair<uint32_t, uint32_t>>& edges, uint32_t root) {
    cls_.resize(num_vertices);
    edges_.resize(edges.size());
    uint32_t t = alloc_tree();
    trees_[t].root = root;
    for (uint32_t c = 0; c < num_vertices; ++c) {
        cls_[c].payload = c;
        cls_[c].tree = t;
        vlist_push(t, c);
    }
    trees_[t].vcount = num_vertices;
    for (uint32_t e = 0; e < edges.size(); ++e) {
        edges_[e].owner[0] = edges[e].first;
        edges_[e].owner[1] = edges[e].second;
        edges_[e].alive = true;
        edges_[e].pruned_alive = true;
        adj_push_front(edges[e].first, 2 * e);
        adj_push_front(edges[e].second, 2 * e + 1);
        cls_[edges[e].first].pruned_deg++;
        cls_[edges[e].second].pruned_deg++;
        cls_[edges[e].first].pruned_xor ^= e;
        cls_[edges[e].second].pruned_xor ^= e;
    }
    if (num_vertices == 0) return;
    // root the tree: BFS from root, placing each parent edge at the head
    std::vector<uint32_t> order{root};
    std::vector<char> seen(num_vertices, 0);
    seen[root] = 1;
    for (size_t i = 0; i < order.size(); ++i) {
        uint32_t c = order[i];
        std::vector<uint32_t> darts;
        for_adjacent(c, [&](uint32_t d) { darts.push_back(d); });
        for (uint32_t d : darts) {
            uint32_t w = owner(d ^ 1);
            if (seen[w]) continue;
            seen[w] = 1;
            // make d^1 the head of w's list
            adj_remove(d ^ 1);
            adj_push_front(w, d ^ 1);
            order.push_back(w);
        }
    }
    for (uint32_t c = 0; c < num_vertices; ++c)
        if (!seen[c]) fail(ErrorCode::NotASubtree, "initial edges do not form a tree");
    if (order.size() != num_vertices || edges.size() + 1 != num_vertices)
        fail(ErrorCode::NotASubtree, "initial edges do not form a tree");
}

uint32_t DualForest::alloc_tree() {
    trees_.push_back(Tree{});
    trees_.back().alive = true;
    return uint32_t(trees_.size() - 1);
}

void DualForest::adj_push_front(uint32_t c, uint32_t dart) {
    uint32_t e = dart >> 1, s = dart & 1;
    edges_[e].owner[s] = c;
    uint32_t h = cls_[c].head;
    if (h == kNone) {
        edges_[e].next[s] = edges_[e].prev[s] = dart;
    } else {
        uint32_t hp = edges_[h >> 1].prev[h & 1];
        edges_[e].next[s] = h;
        edges_[e].prev[s] = hp;
        edges_[hp >> 1].next[hp & 1] = dart;
        edges_[h >> 1].prev[h & 1] = dart;
    }
    cls_[c].head = dart;
    cls_[c].adj_len++;
}

void DualForest::adj_remove(uint32_t dart) {
    uint32_t e = dart >> 1, s = dart & 1;
    uint32_t c = edges_[e].owner[s];
    uint32_t nx = edges_[e].next[s], pv = edges_[e].prev[s];
    if (nx == dart) {
        cls_[c].head = kNone;
    } else {
        edges_[nx >> 1].prev[nx & 1] = pv;
        edges_[pv >> 1].next[pv & 1] = nx;
        if (cls_[c].head == dart) cls_[c].head = nx;
    }
    cls_[c].adj_len--;
}

void DualForest::vlist_push(uint32_t t, uint32_t c) {
    uint32_t h = trees_[t].head;
    if (h == kNone) {
        cls_[c].vnext = cls_[c].vprev = c;
    } else {
        uint32_t hp = cls_[h].vprev;
        cls_[c].vnext = h;
        cls_[c].vprev = hp;
        cls_[hp].vnext = c;
        cls_[h].vprev = c;
    }
    trees_[t].head = c;
    cls_[c].tree = t;
}

void DualForest::vlist_remove(uint32_t c) {
    uint32_t t = cls_[c].tree;
    if (cls_[c].vnext == c) {
        trees_[t].head = kNone;
    } else {
        cls_[cls_[c].vnext].vprev = cls_[c].vprev;
        cls_[cls_[c].vprev].vnext = cls_[c].vnext;
        if (trees_[t].head == c) trees_[t].head = cls_[c].vnext;
    }
    cls_[c].vnext = cls_[c].vprev = kNone;
}

std::vector<uint32_t> DualForest::tree_vertices(uint32_t t) const {
    std::vector<uint32_t> out;
    uint32_t h = trees_[t].head;
    if (h == kNone) return out;
    uint32_t c = h;
    do {
        out.push_back(c);
        c = cls_[c].vnext;
    } while (c != h);
    return out;
}

uint32_t DualForest::contract_edge(uint32_t e) {
    if (!edges_[e].alive) fail(ErrorCode::EdgeAbsent, "contracting a dead edge");
    uint32_t a = edges_[e].owner[0], b = edges_[e].owner[1];
    if (a == b) fail(ErrorCode::NotASubtree, "edge set contains a cycle");
    uint32_t t = cls_[a].tree;
    // parent side: the other endpoint holds e at its head
    uint32_t child, parent;
    if (cls_[b].head != kNone && (cls_[b].head >> 1) == e && trees_[t].root != b) {
        child = b; parent = a;
    } else if (cls_[a].head != kNone && (cls_[a].head >> 1) == e && trees_[t].root != a) {
        child = a; parent = b;
    } else {
        fail(ErrorCode::Internal, "parent-at-head discipline broken");
    }
    adj_remove(2 * e);
    adj_remove(2 * e + 1);
    edges_[e].alive = false;

    uint32_t pruned_deg = cls_[a].pruned_deg + cls_[b].pruned_deg;
    uint32_t pruned_xor = cls_[a].pruned_xor ^ cls_[b].pruned_xor;
    if (edges_[e].pruned_alive) {
        edges_[e].pruned_alive = false;
        pruned_deg -= 2;
    }
    bool pruned_out = cls_[a].pruned_out && cls_[b].pruned_out;

    uint32_t keep = cls_[a].adj_len >= cls_[b].adj_len ? a : b;
    uint32_t lose = keep == a ? b : a;
    uint32_t parent_head = cls_[parent].head;  // survives the merge

    // relabel the shorter list and splice it into the longer one
    stats_.merge_work += cls_[lose].adj_len;
    if (cls_[lose].head != kNone) {
        uint32_t d = cls_[lose].head;
        do {
            edges_[d >> 1].owner[d & 1] = keep;
            d = edges_[d >> 1].next[d & 1];
        } while (d != cls_[lose].head);
        if (cls_[keep].head == kNone) {
            cls_[keep].head = cls_[lose].head;
        } else {
            uint32_t h1 = cls_[keep].head, h2 = cls_[lose].head;
            uint32_t t1 = edges_[h1 >> 1].prev[h1 & 1];
            uint32_t t2 = edges_[h2 >> 1].prev[h2 & 1];
            edges_[t1 >> 1].next[t1 & 1] = h2;
            edges_[h2 >> 1].prev[h2 & 1] = t1;
            edges_[t2 >> 1].next[t2 & 1] = h1;
            edges_[h1 >> 1].prev[h1 & 1] = t2;
        }
        cls_[keep].adj_len += cls_[lose].adj_len;
    }
    cls_[lose].head = kNone;
    cls_[lose].adj_len = 0;
    cls_[keep].head = parent_head;  // parent edge stays at the head
    cls_[keep].pruned_deg = pruned_deg;
    cls_[keep].pruned_xor = pruned_xor;
    cls_[keep].pruned_out = pruned_out;
    if (cls_[lose].color == VertexColor::Black) cls_[keep].color = VertexColor::Black;
    vlist_remove(lose);
    cls_[lose].alive = false;
    trees_[t].vcount--;
    if (trees_[t].root == lose) trees_[t].root = keep;
    (void)parent;
    (void)child;
    // no pruning here: mid-sequence degrees are transient, contract_edges
    // runs the pruning procedure once the survivor is complete
    return keep;
}

uint32_t DualForest::contract_edges(const std::vector<uint32_t>& edge_set, uint32_t payload,
                                    VertexColor color) {
    if (edge_set.empty()) fail(ErrorCode::NotASubtree, "empty contraction set");
    // distinct classes touched must number |edge_set| + 1 for a subtree
    ++stamp_id_;
    if (stamp_.size() < cls_.size()) stamp_.resize(cls_.size(), 0);
    uint32_t distinct = 0;
    for (uint32_t e : edge_set) {
        if (!edges_[e].alive) fail(ErrorCode::NotASubtree, "contraction set not live");
        for (uint32_t s = 0; s < 2; ++s) {
            uint32_t c = edges_[e].owner[s];
            if (stamp_[c] != stamp_id_) {
                stamp_[c] = stamp_id_;
                ++distinct;
            }
        }
    }
    if (distinct != edge_set.size() + 1)
        fail(ErrorCode::NotASubtree, "contraction set does not span a subtree");
    uint32_t survivor = kNone;
    for (uint32_t e : edge_set) survivor = contract_edge(e);
    cls_[survivor].payload = payload;
    set_color(survivor, color);
    if (color == VertexColor::Black) prune_from(survivor);
    return survivor;
}

namespace {

/// Stepwise DFS over a DualForest tree, one adjacency dart per step, so two
/// of them can be interleaved to find the smaller side of a deleted edge in
/// time proportional to that side.
struct ForestWalker {
    struct Frame {
        uint32_t cls;
        uint32_t cur;    // next dart to inspect
        uint32_t start;  // head at frame creation
    };
    std::vector<Frame> stack;
    std::vector<uint32_t> visited;
};

} // namespace

DualForest::SplitResult DualForest::delete_edge(uint32_t e) {
    if (!edges_[e].alive) fail(ErrorCode::EdgeAbsent, "deleting a dead edge");
    uint32_t a = edges_[e].owner[0], b = edges_[e].owner[1];
    uint32_t t = cls_[a].tree;
    uint32_t child;
    if (cls_[b].head != kNone && (cls_[b].head >> 1) == e && trees_[t].root != b) child = b;
    else if (cls_[a].head != kNone && (cls_[a].head >> 1) == e && trees_[t].root != a) child = a;
    else fail(ErrorCode::Internal, "parent-at-head discipline broken");
    uint32_t old_root = trees_[t].root;

    adj_remove(2 * e);
    adj_remove(2 * e + 1);
    edges_[e].alive = false;
    if (edges_[e].pruned_alive) {
        edges_[e].pruned_alive = false;
        cls_[a].pruned_deg--;
        cls_[b].pruned_deg--;
        cls_[a].pruned_xor ^= e;
        cls_[b].pruned_xor ^= e;
    }

    // interleaved stepwise searches; the first to exhaust is the smaller side
    if (stamp_.size() < cls_.size() + 2) stamp_.resize(cls_.size() + 2, 0);
    ForestWalker wk[2];
    uint32_t sstamp[2] = {++stamp_id_, ++stamp_id_};
    uint32_t seeds[2] = {a, b};
    for (int s = 0; s < 2; ++s) {
        stamp_[seeds[s]] = sstamp[s];
        wk[s].visited.push_back(seeds[s]);
        uint32_t h = cls_[seeds[s]].head;
        if (h != kNone) wk[s].stack.push_back(ForestWalker::Frame{seeds[s], h, h});
    }
    auto step = [&](int s) -> bool {  // returns false once exhausted
        auto& w = wk[s];
        if (w.stack.empty()) return false;
        auto& fr = w.stack.back();
        uint32_t d = fr.cur;
        uint32_t nxt = edges_[d >> 1].next[d & 1];
        bool last = nxt == fr.start;
        fr.cur = nxt;
        uint32_t nb = owner(d ^ 1);
        if (last) w.stack.pop_back();
        if (stamp_[nb] != sstamp[s]) {
            stamp_[nb] = sstamp[s];
            w.visited.push_back(nb);
            uint32_t h = cls_[nb].head;
            if (h != kNone) w.stack.push_back(ForestWalker::Frame{nb, h, h});
        }
        return true;
    };
    int smaller_side;
    while (true) {
        if (!step(0)) { smaller_side = 0; break; }
        if (!step(1)) { smaller_side = 1; break; }
    }
    std::vector<uint32_t>& small_list = wk[smaller_side].visited;
    stats_.split_work += small_list.size();
    uint32_t nt = alloc_tree();
    for (uint32_t c : small_list) {
        vlist_remove(c);
        vlist_push(nt, c);
    }
    trees_[nt].vcount = uint32_t(small_list.size());
    trees_[t].vcount -= uint32_t(small_list.size());
    // the child side is re-rooted at the child endpoint; the other side
    // keeps the old root
    if (cls_[child].tree == nt) {
        trees_[nt].root = child;
        trees_[t].root = old_root;
    } else {
        trees_[t].root = child;
        trees_[nt].root = old_root;
    }
    prune_from(a);
    prune_from(b);
    SplitResult res;
    res.smaller_tree = nt;
    res.larger_tree = t;
    res.tree_of_u0 = cls_[a].tree;
    res.tree_of_u1 = cls_[b].tree;
    return res;
}

uint32_t DualForest::insert_edge(uint32_t ca, uint32_t cb) {
    if (!cls_[ca].alive || !cls_[cb].alive) fail(ErrorCode::EdgeAbsent, "dead class");
    uint32_t ta = cls_[ca].tree, tb = cls_[cb].tree;
    if (ta == tb) fail(ErrorCode::SameTree, "insert_edge would create a cycle");
    uint32_t ra = trees_[ta].root;
    uint32_t e = uint32_t(edges_.size());
    edges_.push_back(Edg{});
    edges_[e].alive = true;

    // re-root the b side at cb: parent edges flip along cb's old root path
    uint32_t cur = cb;
    uint32_t down_dart = kNone;  // dart of cur's new parent edge
    uint32_t old_tb_root = trees_[tb].root;
    while (true) {
        uint32_t old_head = (cur == old_tb_root) ? kNone : cls_[cur].head;
        if (down_dart != kNone) {
            adj_remove(down_dart);
            adj_push_front(cur, down_dart);
        }
        if (old_head == kNone) break;
        uint32_t up_dart = old_head;
        cur = owner(up_dart ^ 1);
        down_dart = up_dart ^ 1;
    }

    // attach: the new dart goes to a's tail (a keeps its parent at the head)
    adj_push_front(ca, 2 * e);
    if (cls_[ca].adj_len > 1) cls_[ca].head = edges_[e].next[0];
    adj_push_front(cb, 2 * e + 1);  // cb's parent edge

    if (!cls_[ca].pruned_out && !cls_[cb].pruned_out) {
        edges_[e].pruned_alive = true;
        cls_[ca].pruned_deg++;
        cls_[cb].pruned_deg++;
        cls_[ca].pruned_xor ^= e;
        cls_[cb].pruned_xor ^= e;
    }

    // tree merge: the smaller side's entries are relabelled
    uint32_t big = trees_[ta].vcount >= trees_[tb].vcount ? ta : tb;
    uint32_t small = big == ta ? tb : ta;
    stats_.merge_work += trees_[small].vcount;
    for (uint32_t c : tree_vertices(small)) {
        vlist_remove(c);
        vlist_push(big, c);
    }
    trees_[big].vcount += trees_[small].vcount;
    trees_[small].vcount = 0;
    trees_[small].alive = false;
    trees_[big].root = ra;  // the merged tree stays rooted at the a side

    prune_from(cb);
    prune_from(ca);
    return e;
}

uint32_t DualForest::create_class(uint32_t payload, VertexColor color) {
    uint32_t c = uint32_t(cls_.size());
    cls_.push_back(Cls{});
    cls_[c].payload = payload;
    cls_[c].color = color;
    cls_[c].pruned_out = false;
    uint32_t t = alloc_tree();
    trees_[t].root = c;
    trees_[t].vcount = 1;
    vlist_push(t, c);
    return c;
}

void DualForest::set_color(uint32_t c, VertexColor color) {
    if (cls_[c].color == VertexColor::Black && color == VertexColor::White)
        fail(ErrorCode::Internal, "classes never turn white again");
    cls_[c].color = color;
    if (color == VertexColor::Black) prune_from(c);
}

void DualForest::prune_from(uint32_t c) {
    while (cls_[c].alive && !cls_[c].pruned_out && cls_[c].color == VertexColor::Black) {
        if (cls_[c].pruned_deg == 0) {
            cls_[c].pruned_out = true;
            stats_.pruned_removed++;
            return;
        }
        if (cls_[c].pruned_deg != 1) return;
        uint32_t e = cls_[c].pruned_xor;
        uint32_t w = other_class(e, c);
        edges_[e].pruned_alive = false;
        cls_[c].pruned_deg = 0;
        cls_[c].pruned_xor = 0;
        cls_[c].pruned_out = true;
        stats_.pruned_removed++;
        cls_[w].pruned_deg--;
        cls_[w].pruned_xor ^= e;
        c = w;
    }
}

void DualForest::prune(const std::vector<uint32_t>& seeds) {
    for (uint32_t c : seeds)
        if (cls_[c].alive) prune_from(c);
}

void DualForest::check_pruned_consistency() const {
    // recompute pruning from scratch on the contracted structure
    std::vector<uint32_t> deg(cls_.size(), 0);
    std::vector<uint32_t> xr(cls_.size(), 0);
    std::vector<char> out(cls_.size(), 0);
    for (uint32_t e = 0; e < edges_.size(); ++e) {
        if (!edges_[e].alive) continue;
        for (int s = 0; s < 2; ++s) {
            deg[edges_[e].owner[s]]++;
            xr[edges_[e].owner[s]] ^= e;
        }
    }
    std::vector<char> edge_dead(edges_.size(), 0);
    std::vector<uint32_t> queue;
    for (uint32_t c = 0; c < cls_.size(); ++c)
        if (cls_[c].alive && cls_[c].color == VertexColor::Black && deg[c] <= 1)
            queue.push_back(c);
    while (!queue.empty()) {
        uint32_t c = queue.back();
        queue.pop_back();
        if (out[c] || !cls_[c].alive || cls_[c].color != VertexColor::Black || deg[c] > 1)
            continue;
        out[c] = 1;
        if (deg[c] == 1) {
            uint32_t e = xr[c];
            if (edge_dead[e]) continue;
            edge_dead[e] = 1;
            uint32_t w = other_class(e, c);
            deg[c] = 0;
            xr[c] = 0;
            deg[w]--;
            xr[w] ^= e;
            if (cls_[w].color == VertexColor::Black && deg[w] <= 1) queue.push_back(w);
        }
    }
    for (uint32_t e = 0; e < edges_.size(); ++e) {
        bool expect = edges_[e].alive && !edge_dead[e] && !out[edges_[e].owner[0]] &&
                      !out[edges_[e].owner[1]];
        if (expect != edges_[e].pruned_alive)
            fail(ErrorCode::Internal, "pruned view inconsistent with from-scratch pruning");
    }
    for (uint32_t c = 0; c < cls_.size(); ++c) {
        if (!cls_[c].alive) continue;
        if (bool(out[c]) != cls_[c].pruned_out)
            fail(ErrorCode::Internal, "pruned membership inconsistent");
        if (!cls_[c].pruned_out && cls_[c].color == VertexColor::Black && cls_[c].pruned_deg <= 1)
            fail(ErrorCode::Internal, "black degree-one class survived pruning");
    }
}

} // namespace pmcb
