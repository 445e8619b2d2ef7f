#include "pmcb/lexsp.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmcb {

namespace {

struct HeapEntry {
    uint64_t w;
    uint64_t h;
    uint32_t label;
    uint32_t v;
    friend bool operator>(const HeapEntry& a, const HeapEntry& b) {
        return std::tie(a.w, a.h, a.label) > std::tie(b.w, b.h, b.label);
    }
};

} // namespace

int LexSPT::compare_internal(uint32_t p, uint32_t p2) const {
    if (p == p2) return 0;
    // equal depths by precondition; walk both up, tracking segment minima
    uint32_t a = p, b = p2;
    uint32_t mina = g_->label(a), minb = g_->label(b);
    for (int i = int(up_.size()) - 1; i >= 0; --i) {
        if (up_[i][a] != up_[i][b]) {
            mina = std::min(mina, minlab_[i][a]);
            minb = std::min(minb, minlab_[i][b]);
            a = up_[i][a];
            b = up_[i][b];
        }
    }
    // a and b are now the children of the meet; their labels are included
    mina = std::min(mina, g_->label(a));
    minb = std::min(minb, g_->label(b));
    return mina < minb ? -1 : 1;
}

int LexSPT::lex_compare(uint32_t v, uint32_t p, uint32_t p2) const {
    if (!g_ || up_.empty()) fail(ErrorCode::NotFinalized, "lex tables dropped");
    if (p >= size() || p2 >= size() || v >= size())
        fail(ErrorCode::NotFinalized, "vertex outside tree");
    (void)v;
    if (dist_h_[p] != dist_h_[p2])
        fail(ErrorCode::NotFinalized, "candidate predecessors at different depths");
    return compare_internal(p, p2);
}

uint32_t LexSPT::ancestor(uint32_t v, uint32_t steps) const {
    uint32_t a = v;
    for (uint32_t i = 0; steps; ++i, steps >>= 1) {
        if (steps & 1) {
            if (i >= up_.size() || up_[i][a] == kNone) return kNone;
            a = up_[i][a];
        }
    }
    return a;
}

uint32_t LexSPT::path_min_index(uint32_t a, uint32_t anc) const {
    if (up_.empty()) fail(ErrorCode::NotFinalized, "lex tables dropped");
    if (a >= size() || anc >= size()) fail(ErrorCode::NotAncestor, "vertex outside tree");
    if (dist_h_[anc] > dist_h_[a]) fail(ErrorCode::NotAncestor, "deeper than descendant");
    uint32_t steps = uint32_t(dist_h_[a] - dist_h_[anc]);
    uint32_t cur = a;
    uint32_t best = g_->label(a);
    for (uint32_t i = 0; steps; ++i, steps >>= 1) {
        if (steps & 1) {
            best = std::min(best, minlab_[i][cur]);
            cur = up_[i][cur];
        }
    }
    if (cur != anc) fail(ErrorCode::NotAncestor, "not an ancestor");
    return std::min(best, g_->label(anc));
}

void LexSPT::drop_tables() {
    up_.clear();
    up_.shrink_to_fit();
    minlab_.clear();
    minlab_.shrink_to_fit();
}

size_t LexSPT::storage_bytes() const {
    size_t b = parent_.size() * (4 * 4 + 2 * 8) + tree_edge_.size();
    for (const auto& lv : up_) b += lv.size() * 8;
    return b;
}

LexSPT lex_sp_tree(const PlanarGraph& g, uint32_t s) {
    uint32_t n = g.num_vertices();
    LexSPT t;
    t.g_ = &g;
    t.source_ = s;
    t.parent_.assign(n, kNone);
    t.parent_edge_.assign(n, kNone);
    t.first_edge_.assign(n, kNone);
    t.dist_w_.assign(n, UINT64_MAX);
    t.dist_h_.assign(n, UINT64_MAX);
    t.tree_edge_.assign(g.num_edges(), 0);
    t.order_.reserve(n);

    uint32_t levels = 1;
    while ((1u << levels) < n) ++levels;
    t.up_.assign(levels, std::vector<uint32_t>(n, kNone));
    t.minlab_.assign(levels, std::vector<uint32_t>(n, UINT32_MAX));

    std::vector<char> done(n, 0);
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap;
    t.dist_w_[s] = 0;
    t.dist_h_[s] = 0;
    heap.push(HeapEntry{0, 0, g.label(s), s});
    while (!heap.empty()) {
        HeapEntry top = heap.top();
        heap.pop();
        uint32_t u = top.v;
        if (done[u] || top.w != t.dist_w_[u] || top.h != t.dist_h_[u]) continue;
        done[u] = 1;
        t.order_.push_back(u);
        if (t.parent_[u] != kNone) {
            t.tree_edge_[t.parent_edge_[u]] = 1;
            uint32_t p = t.parent_[u];
            t.first_edge_[u] = p == s ? t.parent_edge_[u] : t.first_edge_[p];
            t.up_[0][u] = p;
            t.minlab_[0][u] = std::min(g.label(u), g.label(p));
            for (uint32_t i = 1; i < levels; ++i) {
                uint32_t mid = t.up_[i - 1][u];
                if (mid == kNone || t.up_[i - 1][mid] == kNone) break;
                t.up_[i][u] = t.up_[i - 1][mid];
                t.minlab_[i][u] = std::min(t.minlab_[i - 1][u], t.minlab_[i - 1][mid]);
            }
        }
        for (uint32_t d : g.rotation(u)) {
            uint32_t e = d >> 1;
            uint32_t v = g.head(d);
            if (done[v]) continue;
            uint64_t nw = t.dist_w_[u] + g.edge(e).w;
            uint64_t nh = t.dist_h_[u] + 1;
            if (nw < t.dist_w_[v] || (nw == t.dist_w_[v] && nh < t.dist_h_[v])) {
                t.dist_w_[v] = nw;
                t.dist_h_[v] = nh;
                t.parent_[v] = u;
                t.parent_edge_[v] = e;
                heap.push(HeapEntry{nw, nh, g.label(v), v});
            } else if (nw == t.dist_w_[v] && nh == t.dist_h_[v]) {
                // weight/hops tie: keep or replace the predecessor by the
                // smallest-index rule, decided from the lifting tables
                int c = t.compare_internal(t.parent_[v], u);
                if (c > 0) {
                    t.parent_[v] = u;
                    t.parent_edge_[v] = e;
                } else if (c == 0 && e < t.parent_edge_[v]) {
                    t.parent_edge_[v] = e;  // parallel edges: lowest edge id
                }
            }
        }
    }
    if (t.order_.size() != n) fail(ErrorCode::Disconnected, "lex_sp_tree needs a connected graph");
    return t;
}

std::vector<LexSPT> lex_sp_forest(const PlanarGraph& g, const std::vector<uint32_t>& sources,
                                  ExecMode mode) {
    std::vector<LexSPT> out(sources.size());
#ifdef _OPENMP
    if (mode == ExecMode::Parallel) {
        #pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < long(sources.size()); ++i)
            out[i] = lex_sp_tree(g, sources[i]);
        return out;
    }
#endif
    (void)mode;
    for (size_t i = 0; i < sources.size(); ++i) out[i] = lex_sp_tree(g, sources[i]);
    return out;
}

} // namespace pmcb
