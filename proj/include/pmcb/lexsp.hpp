#ifndef PMCB_LEXSP_HPP
#define PMCB_LEXSP_HPP

#include <cstdint>
#include <vector>

#include "pmcb/planar_graph.hpp"

namespace pmcb {

/// Path weight with the tie-breaking epsilon carried symbolically: `hops`
/// counts edges. Comparison is lexicographic, addition componentwise.
struct LexWeight {
    uint64_t w = 0;
    uint64_t hops = 0;

    friend LexWeight operator+(const LexWeight& a, const LexWeight& b) {
        return LexWeight{a.w + b.w, a.hops + b.hops};
    }
    friend bool operator==(const LexWeight&, const LexWeight&) = default;
    friend auto operator<=>(const LexWeight&, const LexWeight&) = default;
};

/// Lex-shortest path tree: Dijkstra with O(log n) lexicographic tie-breaking
/// through per-vertex ancestor tables. Vertex indices used by the tie rule
/// are the graph labels, which stay fixed across subgraphs.
class LexSPT {
public:
    LexSPT() = default;

    uint32_t source() const { return source_; }
    uint32_t size() const { return uint32_t(parent_.size()); }
    uint32_t parent(uint32_t v) const { return parent_[v]; }
    uint32_t parent_edge(uint32_t v) const { return parent_edge_[v]; }
    LexWeight dist(uint32_t v) const { return LexWeight{dist_w_[v], dist_h_[v]}; }
    uint32_t depth(uint32_t v) const { return uint32_t(dist_h_[v]); }
    /// First edge on the tree path source -> v (kNone for the source).
    uint32_t first_edge(uint32_t v) const { return first_edge_[v]; }
    /// Vertices in finalization order; the source comes first.
    const std::vector<uint32_t>& order() const { return order_; }
    bool is_tree_edge(uint32_t e) const { return tree_edge_[e] != 0; }

    /// -1 if the path via p is lex-smaller, +1 if the path via p2 is, 0 if
    /// p == p2. Both paths must reach v with equal LexWeight.
    int lex_compare(uint32_t v, uint32_t p, uint32_t p2) const;

    /// Smallest vertex label on the tree path between anc and a, inclusive.
    uint32_t path_min_index(uint32_t a, uint32_t anc) const;

    /// Ancestor of v exactly `steps` edges up, or kNone.
    uint32_t ancestor(uint32_t v, uint32_t steps) const;

    bool has_tables() const { return !up_.empty(); }
    uint32_t table_levels() const { return uint32_t(up_.size()); }
    uint32_t table_up(uint32_t level, uint32_t v) const { return up_[level][v]; }
    uint32_t table_min(uint32_t level, uint32_t v) const { return minlab_[level][v]; }

    /// Frees the lifting tables; queries needing them throw afterwards.
    void drop_tables();

    size_t storage_bytes() const;

    friend LexSPT lex_sp_tree(const PlanarGraph& g, uint32_t s);

private:
    int compare_internal(uint32_t p, uint32_t p2) const;

    const PlanarGraph* g_ = nullptr;
    uint32_t source_ = kNone;
    std::vector<uint32_t> parent_, parent_edge_, first_edge_, order_;
    std::vector<uint64_t> dist_w_, dist_h_;
    std::vector<char> tree_edge_;
    std::vector<std::vector<uint32_t>> up_;      // up_[i][v]: 2^i-edge ancestor
    std::vector<std::vector<uint32_t>> minlab_;  // min label on that segment, inclusive
};

/// Lex-shortest path tree with source s; the graph must be connected.
LexSPT lex_sp_tree(const PlanarGraph& g, uint32_t s);

enum class ExecMode { Serial, Parallel };

/// Per-source lex-shortest path trees. The parallel lane distributes sources
/// over OpenMP threads; each tree is computed independently, so both lanes
/// produce identical results.
std::vector<LexSPT> lex_sp_forest(const PlanarGraph& g, const std::vector<uint32_t>& sources,
                                  ExecMode mode = ExecMode::Parallel);

} // namespace pmcb

#endif
