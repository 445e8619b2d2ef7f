#ifndef PMCB_DUAL_FOREST_HPP
#define PMCB_DUAL_FOREST_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "pmcb/error.hpp"
#include "pmcb/planar_graph.hpp"

namespace pmcb {

enum class VertexColor : uint8_t { White, Black };

/// Rooted dynamic forest over face classes: the contracted dual trees of one
/// boundary root, with the pruned variant maintained as flags on the same
/// structure (per-edge live bit plus per-class degree/xor accumulators).
///
/// Invariants kept by every public operation:
///  - each tree's non-root classes hold their parent edge at the adjacency
///    head (the root's head is unconstrained),
///  - adjacency lists merge shorter-into-longer (relabel work is counted in
///    stats().merge_work),
///  - edge deletion finds the smaller side by interleaved searches and moves
///    its vertex entries to a fresh tree (stats().split_work),
///  - no black class of the pruned view has degree <= 1.
class DualForest {
public:
    struct Stats {
        uint64_t merge_work = 0;
        uint64_t split_work = 0;
        uint64_t pruned_removed = 0;
    };

    DualForest() = default;

    /// Builds one tree over `num_vertices` classes from `edges` (a tree edge
    /// list), rooted at `root`. Edge ids are their positions in `edges`.
    DualForest(uint32_t num_vertices, const std::vector<std::pair<uint32_t, uint32_t>>& edges,
               uint32_t root);

    uint32_t num_class_slots() const { return uint32_t(cls_.size()); }
    uint32_t num_edge_slots() const { return uint32_t(edges_.size()); }

    bool class_alive(uint32_t c) const { return cls_[c].alive; }
    bool edge_alive(uint32_t e) const { return edges_[e].alive; }
    /// Pruned-tree membership of an edge: the constant-time line-4 test.
    bool contains_edge(uint32_t e) const { return edges_[e].pruned_alive; }
    bool class_in_pruned(uint32_t c) const { return cls_[c].alive && !cls_[c].pruned_out; }

    uint32_t owner(uint32_t dart) const { return edges_[dart >> 1].owner[dart & 1]; }
    std::pair<uint32_t, uint32_t> endpoints(uint32_t e) const {
        return {edges_[e].owner[0], edges_[e].owner[1]};
    }
    uint32_t other_class(uint32_t e, uint32_t c) const {
        return edges_[e].owner[edges_[e].owner[0] == c ? 1 : 0];
    }

    uint32_t tree_of(uint32_t c) const { return cls_[c].tree; }
    uint32_t tree_size(uint32_t t) const { return trees_[t].vcount; }
    uint32_t tree_root(uint32_t t) const { return trees_[t].root; }
    uint32_t degree(uint32_t c) const { return cls_[c].adj_len; }
    uint32_t parent_edge(uint32_t c) const {
        return (cls_[c].head == kNone || trees_[cls_[c].tree].root == c) ? kNone
                                                                         : (cls_[c].head >> 1);
    }
    uint32_t payload(uint32_t c) const { return cls_[c].payload; }
    void set_payload(uint32_t c, uint32_t p) { cls_[c].payload = p; }
    VertexColor color(uint32_t c) const { return cls_[c].color; }

    /// Vertices of a tree, via its intrusive list.
    std::vector<uint32_t> tree_vertices(uint32_t t) const;

    /// Calls fn(dart) for every adjacency entry of c, head first.
    template <typename F>
    void for_adjacent(uint32_t c, F&& fn) const {
        uint32_t h = cls_[c].head;
        if (h == kNone) return;
        uint32_t d = h;
        do {
            uint32_t nxt = edges_[d >> 1].next[d & 1];
            fn(d);
            d = nxt;
        } while (d != h);
    }

    /// Stepwise adjacency iteration: head dart of c, and successor of d in
    /// c's circular list (kNone once it wraps around).
    uint32_t adj_head(uint32_t c) const { return cls_[c].head; }
    uint32_t adj_next(uint32_t c, uint32_t d) const {
        uint32_t nxt = edges_[d >> 1].next[d & 1];
        return nxt == cls_[c].head ? kNone : nxt;
    }

    /// Contracts a set of live edges spanning a subtree into one class linked
    /// to `payload`; returns the surviving class. The new class is coloured
    /// `color` and the pruning procedure is run from it.
    uint32_t contract_edges(const std::vector<uint32_t>& edge_set, uint32_t payload,
                            VertexColor color);

    /// Contracts one live edge; the survivor keeps both lists merged
    /// shorter-into-longer and the parent head of the parent side.
    uint32_t contract_edge(uint32_t e);

    struct SplitResult {
        uint32_t smaller_tree;
        uint32_t larger_tree;
        uint32_t tree_of_u0;  // tree now containing the first endpoint
        uint32_t tree_of_u1;
    };

    /// Deletes a live edge; the smaller side's vertex entries move to a
    /// fresh tree, the larger side keeps the old identity.
    SplitResult delete_edge(uint32_t e);

    /// Joins two distinct trees with a fresh edge between the given classes;
    /// the second side is re-rooted at `cb`. Returns the new edge id.
    ///
    /// The pruned view stays exact when both endpoints are still in the
    /// pruned tree, or when the attached side is a black class (the
    /// algorithm's only uses). Attaching white material to a pruned-away
    /// class would need vertices resurrected and is not supported.
    uint32_t insert_edge(uint32_t ca, uint32_t cb);

    /// New isolated class (its own tree).
    uint32_t create_class(uint32_t payload, VertexColor color);

    /// Recolours a class; turning a class black seeds the pruning procedure.
    void set_color(uint32_t c, VertexColor color);

    /// Pruning procedure from explicit seeds (black degree-one candidates).
    void prune(const std::vector<uint32_t>& seeds);

    const Stats& stats() const { return stats_; }

    /// Structural check used by instrumented runs: the pruned view equals
    /// pruning the contracted view from scratch.
    void check_pruned_consistency() const;

private:
    struct Cls {
        uint32_t head = kNone;
        uint32_t adj_len = 0;
        uint32_t payload = kNone;
        uint32_t tree = kNone;
        uint32_t pruned_deg = 0;
        uint32_t pruned_xor = 0;
        uint32_t vnext = kNone, vprev = kNone;
        VertexColor color = VertexColor::White;
        bool alive = true;
        bool pruned_out = false;
    };
    struct Edg {
        uint32_t owner[2] = {kNone, kNone};
        uint32_t next[2] = {kNone, kNone};
        uint32_t prev[2] = {kNone, kNone};
        bool alive = false;
        bool pruned_alive = false;
    };
    struct Tree {
        uint32_t head = kNone;  // vertex list
        uint32_t vcount = 0;
        uint32_t root = kNone;
        bool alive = false;
    };

    void adj_remove(uint32_t dart);
    void adj_push_front(uint32_t c, uint32_t dart);
    void vlist_remove(uint32_t c);
    void vlist_push(uint32_t t, uint32_t c);
    void prune_from(uint32_t c);
    uint32_t alloc_tree();

    std::vector<Cls> cls_;
    std::vector<Edg> edges_;
    std::vector<Tree> trees_;
    Stats stats_;
    mutable std::vector<uint32_t> stamp_;
    mutable uint32_t stamp_id_ = 0;
};

} // namespace pmcb

#endif
