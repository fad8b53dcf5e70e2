#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include <hrg/config.hpp>
#include <hrg/errors.hpp>
#include <hrg/graph.hpp>
#include <hrg/union_find.hpp>

namespace hrg {

/// Per-level giant-component structure over all balls of the truncation.
///
/// Level 1: in each 1-ball, components from class-1 edges; the giant is the
/// largest one (ties: the component containing the smallest vertex id).
/// Level k: the vertices are the level-(k-1) giants of the N sub-balls of each
/// k-ball; two giants are adjacent iff some class-k edge joins a point of one
/// to a point of the other; edges touching non-giant points are ignored. A
/// giant requires at least 2 members; a singleton largest cluster is recorded
/// as no-giant and breaks the chain.
class CascadeTree {
public:
    struct Giant {
        bool present = false;
        std::uint64_t members = 0;              // ||G||: member count (points at level 1)
        std::uint64_t points = 0;               // |G|: points of the truncation inside
        std::vector<std::uint32_t> member_slots; // sub-ball indices, levels >= 2 only
    };

    struct LevelSummary {
        std::uint32_t level = 0;
        bool giant_present = false;
        std::uint64_t giant_members = 0;  // ||G^(k)|| of the ball containing 0
        std::uint64_t cascade_points = 0; // C^{N,k} of the ball containing 0
        bool chain_intact = false;        // 0's chain unbroken through this level
    };

    const HierSpace& space() const noexcept { return space_; }

    /// Deepest level through which vertex 0's giant chain is unbroken.
    std::uint32_t chain_depth() const noexcept { return depth_[0]; }
    bool chain_intact(std::uint32_t level) const {
        if (level > space_.depth()) throw ConfigError("depth exceeds truncation depth");
        return depth_[0] >= level;
    }

    /// Deepest cascade level vertex v belongs to (0 = none).
    std::uint32_t depth_of(VertexId v) const { return depth_.at(v); }

    /// C^{N,k}: points in the level-k giant of the k-ball containing 0
    /// (0 when that giant is absent).
    std::uint64_t cascade_points(std::uint32_t k) const { return giant(k, 0).points; }

    const Giant& giant(std::uint32_t level, std::uint64_t ball) const {
        if (level < 1 || level > space_.depth()) throw ConfigError("cascade level out of range");
        return giants_[level - 1].at(ball);
    }

    std::vector<LevelSummary> summary() const {
        std::vector<LevelSummary> rows;
        for (std::uint32_t k = 1; k <= space_.depth(); ++k) {
            const Giant& g = giant(k, 0);
            rows.push_back({k, g.present, g.members, g.points, depth_[0] >= k});
        }
        return rows;
    }

private:
    friend CascadeTree build_cascade(const SampledGraph&, const GraphConfig&);

    explicit CascadeTree(HierSpace space) : space_(space) {}

    HierSpace space_;
    std::vector<std::uint8_t> depth_;
    std::vector<std::vector<Giant>> giants_; // [level-1][ball]
};

/// Bottom-up construction of the cascade of giant components. Level-k
/// processing touches only class-k edges, so the whole build is O(E alpha(V))
/// plus one promotion sweep per level.
inline CascadeTree build_cascade(const SampledGraph& g, const GraphConfig& cfg) {
    const HierSpace space = g.space();
    if (!(space == cfg.space())) throw ConfigError("graph and config disagree on (N, K)");
    if (space.size() > (std::uint64_t{1} << 28))
        throw ConfigError("truncation too large for cascade analysis");

    CascadeTree tree(space);
    tree.depth_.assign(space.size(), 0);
    tree.giants_.resize(space.depth());

    const std::uint32_t N = space.order();

    // Level 1: point-level components per 1-ball.
    {
        auto& level = tree.giants_[0];
        level.resize(space.ball_count(1));
        for (std::uint64_t b = 0; b < space.ball_count(1); ++b) {
            const BallId ball{1, b};
            ComponentLabeling labeling(g, ball, 1);
            CascadeTree::Giant gi;
            gi.members = labeling.giant_size();
            gi.points = labeling.giant_size();
            gi.present = gi.members >= 2;
            if (gi.present) {
                const VertexId base = space.ball_base(ball);
                for (std::uint64_t off = 0; off < space.ball_size(1); ++off)
                    if (labeling.in_giant(base + off)) tree.depth_[base + off] = 1;
            } else {
                gi.members = 0;
                gi.points = 0;
            }
            level[b] = std::move(gi);
        }
    }

    // Levels 2..K: giants of giants.
    for (std::uint32_t k = 2; k <= space.depth(); ++k) {
        auto& level = tree.giants_[k - 1];
        level.resize(space.ball_count(k));
        const std::uint64_t sub = space.ball_size(k - 1);
        for (std::uint64_t b = 0; b < space.ball_count(k); ++b) {
            const BallId ball{k, b};
            const VertexId base = space.ball_base(ball);
            UnionFind uf(N);
            for (const Edge& e : g.class_edges_in_ball(k, ball)) {
                if (tree.depth_[e.u] < k - 1 || tree.depth_[e.v] < k - 1) continue;
                uf.unite(static_cast<std::uint32_t>((e.u - base) / sub),
                         static_cast<std::uint32_t>((e.v - base) / sub));
            }
            // Cluster sizes in member giants; slots without a giant stay
            // singletons because no qualifying edge can touch them.
            std::vector<std::uint32_t> cluster_members(N, 0);
            for (std::uint32_t s = 0; s < N; ++s)
                if (tree.giants_[k - 2][b * N + s].present) ++cluster_members[uf.find(s)];
            std::uint32_t best = 0;
            for (std::uint32_t s = 0; s < N; ++s) best = std::max(best, cluster_members[s]);

            CascadeTree::Giant gi;
            if (best >= 2) {
                std::uint32_t giant_cluster = 0;
                for (std::uint32_t s = 0; s < N; ++s) {
                    if (tree.giants_[k - 2][b * N + s].present &&
                        cluster_members[uf.find(s)] == best) {
                        giant_cluster = uf.find(s); // first hit = smallest member slot
                        break;
                    }
                }
                gi.present = true;
                gi.members = best;
                for (std::uint32_t s = 0; s < N; ++s) {
                    if (!tree.giants_[k - 2][b * N + s].present) continue;
                    if (uf.find(s) != giant_cluster) continue;
                    gi.member_slots.push_back(s);
                    gi.points += tree.giants_[k - 2][b * N + s].points;
                    const VertexId sub_base = base + s * sub;
                    for (std::uint64_t off = 0; off < sub; ++off)
                        if (tree.depth_[sub_base + off] == k - 1)
                            tree.depth_[sub_base + off] = static_cast<std::uint8_t>(k);
                }
            }
            level[b] = std::move(gi);
        }
    }
    return tree;
}

/// True iff vertex 0's giant chain is unbroken through `depth` levels.
inline bool cascade_percolates(const CascadeTree& tree, std::uint32_t depth) {
    return depth == 0 || tree.chain_intact(depth);
}

// ---------------------------------------------------------------------------
// Diagnostics: how much the giant-only reduction loses at finite N
// ---------------------------------------------------------------------------

/// Measured (not bounded) discrepancies between the cascade construction and
/// plain point-level connectivity.
struct CascadeDiagnostics {
    /// Per level k >= 2: class-k in-ball edges dropped because an endpoint is
    /// not a level-(k-1) giant point. Index 0 <-> level 2.
    std::vector<std::uint64_t> ignored_edges;
    /// Per level k >= 2: balls where point-level connectivity (all edges of
    /// classes <= k) links the sub-ball giants differently than the
    /// giant-endpoint-only adjacency.
    std::vector<std::uint64_t> balls_with_changed_connectivity;
    /// Vertex 0 reaches some point at hierarchical distance K using all edges.
    bool plain_percolates = false;
    /// chain_intact(K) of the cascade construction.
    bool cascade_percolates = false;
};

inline CascadeDiagnostics diagnose_cascade(const SampledGraph& g, const CascadeTree& tree) {
    const HierSpace& space = g.space();
    const std::uint32_t N = space.order();
    CascadeDiagnostics diag;
    diag.cascade_percolates = tree.chain_intact(space.depth());

    for (std::uint32_t k = 2; k <= space.depth(); ++k) {
        std::uint64_t ignored = 0;
        std::uint64_t changed_balls = 0;
        const std::uint64_t sub = space.ball_size(k - 1);
        for (std::uint64_t b = 0; b < space.ball_count(k); ++b) {
            const BallId ball{k, b};
            const VertexId base = space.ball_base(ball);

            UnionFind giant_adj(N);
            for (const Edge& e : g.class_edges_in_ball(k, ball)) {
                if (tree.depth_of(e.u) >= k - 1 && tree.depth_of(e.v) >= k - 1)
                    giant_adj.unite(static_cast<std::uint32_t>((e.u - base) / sub),
                                    static_cast<std::uint32_t>((e.v - base) / sub));
                else
                    ++ignored;
            }

            // Point-level connectivity inside the ball with classes <= k.
            UnionFind points(space.ball_size(k));
            for (std::uint32_t cls = 1; cls <= k; ++cls)
                for (const Edge& e : g.class_edges_in_ball(cls, ball))
                    points.unite(static_cast<std::uint32_t>(e.u - base),
                                 static_cast<std::uint32_t>(e.v - base));

            // Compare the two partitions over slots that carry a giant, via a
            // representative giant point per slot.
            std::unordered_map<std::uint64_t, std::uint32_t> point_root_to_slot_root;
            std::unordered_map<std::uint32_t, std::uint64_t> slot_root_to_point_root;
            bool changed = false;
            for (std::uint32_t s = 0; s < N && !changed; ++s) {
                const auto& sub_giant = tree.giant(k - 1, b * N + s);
                if (!sub_giant.present) continue;
                std::optional<std::uint64_t> rep;
                for (std::uint64_t off = 0; off < sub; ++off) {
                    if (tree.depth_of(base + s * sub + off) >= k - 1) {
                        rep = s * sub + off;
                        break;
                    }
                }
                if (!rep) continue;
                const std::uint64_t proot = points.find(static_cast<std::uint32_t>(*rep));
                const std::uint32_t sroot = giant_adj.find(s);
                auto [it1, fresh1] = point_root_to_slot_root.try_emplace(proot, sroot);
                if (!fresh1 && it1->second != sroot) changed = true;
                auto [it2, fresh2] = slot_root_to_point_root.try_emplace(sroot, proot);
                if (!fresh2 && it2->second != proot) changed = true;
            }
            if (changed) ++changed_balls;
        }
        diag.ignored_edges.push_back(ignored);
        diag.balls_with_changed_connectivity.push_back(changed_balls);
    }

    // Plain percolation: 0 connected to a point at distance exactly K.
    {
        UnionFind uf(space.size());
        for (std::uint32_t k = 1; k <= space.depth(); ++k)
            for (const Edge& e : g.class_edges(k))
                uf.unite(static_cast<std::uint32_t>(e.u), static_cast<std::uint32_t>(e.v));
        const std::uint32_t root0 = uf.find(0);
        const std::uint64_t top = space.ball_size(space.depth() - 1);
        for (VertexId v = top; v < space.size(); ++v) {
            if (uf.find(static_cast<std::uint32_t>(v)) == root0) {
                diag.plain_percolates = true;
                break;
            }
        }
    }
    return diag;
}

} // namespace hrg
