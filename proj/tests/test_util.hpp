#ifndef PMCB_TEST_UTIL_HPP
#define PMCB_TEST_UTIL_HPP

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "pmcb/cycles.hpp"
#include "pmcb/io.hpp"
#include "pmcb/planar_graph.hpp"

namespace pmcb_test {

using namespace pmcb;

inline constexpr int64_t U = 1000000;  // one coordinate unit in micro-units

inline PlanarGraph fix_t3() {
    return build_embedding({{0, 0}, {U, 0}, {0, U}},
                           {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
}

inline PlanarGraph fix_k4() {
    return build_embedding({{0, 0}, {4 * U, 0}, {0, 4 * U}, {U, U}},
                           {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {0, 3, 1}, {1, 3, 1}, {2, 3, 1}});
}

inline PlanarGraph fix_c4(uint64_t w = 1) {
    return build_embedding({{0, 0}, {U, 0}, {U, U}, {0, U}},
                           {{0, 1, w}, {1, 2, w}, {2, 3, w}, {3, 0, w}});
}

// ---- brute-force oracles ----

/// All simple cycles as sorted edge-id sets (n small).
inline std::vector<std::vector<uint32_t>> all_simple_cycles(const PlanarGraph& g) {
    std::vector<std::vector<uint32_t>> out;
    uint32_t n = g.num_vertices();
    std::vector<char> used(n, 0);
    std::vector<uint32_t> path_edges;
    // enumerate cycles whose smallest vertex is s, traversed with the second
    // vertex smaller than the last to kill direction duplicates
    for (uint32_t s = 0; s < n; ++s) {
        std::vector<uint32_t> stack;
        std::function<void(uint32_t)> dfs = [&](uint32_t v) {
            for (uint32_t d : g.rotation(v)) {
                uint32_t w = g.head(d);
                uint32_t e = d >> 1;
                if (!path_edges.empty() && e == path_edges.back()) continue;
                if (w == s && path_edges.size() >= 1) {
                    std::vector<uint32_t> cyc = path_edges;
                    cyc.push_back(e);
                    if (cyc.size() < 3) continue;
                    // canonical direction: second vertex < last vertex
                    uint32_t second = g.other(cyc[0], s);
                    uint32_t last = v;
                    if (second < last) {
                        std::sort(cyc.begin(), cyc.end());
                        out.push_back(cyc);
                    }
                    continue;
                }
                if (w <= s || used[w]) continue;
                used[w] = 1;
                path_edges.push_back(e);
                dfs(w);
                path_edges.pop_back();
                used[w] = 0;
            }
        };
        used[s] = 1;
        dfs(s);
        used[s] = 0;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline uint64_t edge_set_weight(const PlanarGraph& g, const std::vector<uint32_t>& es) {
    uint64_t w = 0;
    for (uint32_t e : es) w += g.edge(e).w;
    return w;
}

/// Plain Dijkstra distances (weights only).
inline std::vector<uint64_t> dijkstra(const PlanarGraph& g, uint32_t s) {
    std::vector<uint64_t> dist(g.num_vertices(), UINT64_MAX);
    std::priority_queue<std::pair<uint64_t, uint32_t>,
                        std::vector<std::pair<uint64_t, uint32_t>>, std::greater<>> pq;
    dist[s] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
        auto [dw, u] = pq.top();
        pq.pop();
        if (dw != dist[u]) continue;
        for (uint32_t d : g.rotation(u)) {
            uint64_t nd = dw + g.edge(d >> 1).w;
            if (nd < dist[g.head(d)]) {
                dist[g.head(d)] = nd;
                pq.push({nd, g.head(d)});
            }
        }
    }
    return dist;
}

/// All simple paths s -> t as vertex sequences (n small).
inline std::vector<std::vector<uint32_t>> all_simple_paths(const PlanarGraph& g, uint32_t s,
                                                           uint32_t t) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<char> used(g.num_vertices(), 0);
    std::vector<uint32_t> path{s};
    std::function<void(uint32_t)> dfs = [&](uint32_t v) {
        if (v == t) {
            out.push_back(path);
            return;
        }
        for (uint32_t d : g.rotation(v)) {
            uint32_t w = g.head(d);
            if (used[w]) continue;
            used[w] = 1;
            path.push_back(w);
            dfs(w);
            path.pop_back();
            used[w] = 0;
        }
    };
    used[s] = 1;
    dfs(s);
    return out;
}

/// Lexicographic path comparison per the three w' conditions; label-based.
/// Returns -1 if a < b, 1 if a > b, 0 if identical vertex sequences.
inline int lex_path_compare(const PlanarGraph& g, const std::vector<uint32_t>& a,
                            const std::vector<uint32_t>& b) {
    auto weight = [&](const std::vector<uint32_t>& p) {
        uint64_t w = 0;
        for (size_t i = 0; i + 1 < p.size(); ++i) {
            uint64_t best = UINT64_MAX;
            for (uint32_t d : g.rotation(p[i]))
                if (g.head(d) == p[i + 1]) best = std::min(best, g.edge(d >> 1).w);
            w += best;
        }
        return w;
    };
    uint64_t wa = weight(a), wb = weight(b);
    if (wa != wb) return wa < wb ? -1 : 1;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    std::set<uint32_t> va(a.begin(), a.end()), vb(b.begin(), b.end());
    uint32_t ma = UINT32_MAX, mb = UINT32_MAX;
    for (uint32_t v : va)
        if (!vb.count(v)) ma = std::min(ma, g.label(v));
    for (uint32_t v : vb)
        if (!va.count(v)) mb = std::min(mb, g.label(v));
    if (ma == UINT32_MAX && mb == UINT32_MAX) return 0;
    return ma < mb ? -1 : 1;
}

} // namespace pmcb_test

#endif
