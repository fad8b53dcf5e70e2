#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <vector>

#include <hrg/cascade.hpp>
#include <hrg/theory.hpp>

#include "oracles.hpp"

using namespace hrg;

namespace {

GraphConfig make_cfg(std::uint32_t N, std::uint32_t K, std::vector<double> c, std::uint64_t seed) {
    GraphConfig cfg;
    cfg.order = N;
    cfg.depth = K;
    cfg.c = CRule::list(std::move(c));
    cfg.seed = seed;
    return cfg;
}

/// Brute-force oracle for the 2-level fixture: reachability over class-1
/// edges plus those class-2 edges whose endpoints are level-1 giant points.
std::set<VertexId> reachable_giant_points(const SampledGraph& g, const CascadeTree& tree,
                                          VertexId start) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    for (const Edge& e : g.class_edges(1))
        if (tree.depth_of(e.u) >= 1 && tree.depth_of(e.v) >= 1) pairs.emplace_back(e.u, e.v);
    for (const Edge& e : g.class_edges(2))
        if (tree.depth_of(e.u) >= 1 && tree.depth_of(e.v) >= 1) pairs.emplace_back(e.u, e.v);
    const auto labels = oracle::dfs_components(g.vertex_count(), pairs);
    std::set<VertexId> out;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (tree.depth_of(v) >= 1 && labels[v] == labels[start]) out.insert(v);
    return out;
}

} // namespace

TEST_CASE("K=1 cascade degenerates to the per-ball giant") {
    const auto cfg = make_cfg(60, 1, {2.5}, 5);
    const auto g = sample_graph(cfg);
    const auto tree = build_cascade(g, cfg);
    ComponentLabeling labeling(g, BallId{1, 0}, 1);
    const auto& giant = tree.giant(1, 0);
    CHECK(giant.present == (labeling.giant_size() >= 2));
    CHECK(giant.points == labeling.giant_size());
    CHECK(tree.chain_intact(1) == labeling.in_giant(0));
    CHECK(cascade_percolates(tree, 0));
}

TEST_CASE("hand-built 2-level fixture: giants of giants") {
    // N=3, K=2: balls {0,1,2}, {3,4,5}, {6,7,8}.
    // 1-ball giants: A = {0,1}, B = {3,4}; third ball has no giant.
    // One class-2 edge joins giant points 0 and 3; another touches the
    // non-giant point 2 and must be ignored.
    HierSpace sp(3, 2);
    SampledGraph g(sp, {{Edge{0, 1}, Edge{3, 4}}, {Edge{0, 3}, Edge{2, 6}}});
    const auto cfg = make_cfg(3, 2, {1.0, 1.0}, 0);
    const auto tree = build_cascade(g, cfg);

    const auto& lvl2 = tree.giant(2, 0);
    REQUIRE(lvl2.present);
    CHECK(lvl2.members == 2);
    CHECK(lvl2.points == 4); // |A| + |B|
    CHECK(lvl2.member_slots == std::vector<std::uint32_t>{0, 1});
    CHECK(tree.cascade_points(2) == 4);
    CHECK(tree.chain_depth() == 2);
    CHECK(cascade_percolates(tree, 2));

    CHECK(tree.depth_of(0) == 2);
    CHECK(tree.depth_of(1) == 2);
    CHECK(tree.depth_of(3) == 2);
    CHECK(tree.depth_of(4) == 2);
    CHECK(tree.depth_of(2) == 0);
    CHECK(tree.depth_of(6) == 0);

    // brute-force: cascade points = giant points reachable from 0 through
    // giant-respecting edges
    const auto reach = reachable_giant_points(g, tree, 0);
    std::set<VertexId> cascade;
    for (VertexId v = 0; v < sp.size(); ++v)
        if (tree.depth_of(v) == 2) cascade.insert(v);
    CHECK(reach == cascade);

    const auto diag = diagnose_cascade(g, tree);
    CHECK(diag.ignored_edges == std::vector<std::uint64_t>{1}); // the (2,6) edge
    CHECK(diag.cascade_percolates);
}

TEST_CASE("chain breaks when 0's giant is outside the level-2 giant") {
    HierSpace sp(3, 2);
    // giants {0,1}, {3,4}, {6,7}; class-2 edge joins only B and C
    SampledGraph g(sp, {{Edge{0, 1}, Edge{3, 4}, Edge{6, 7}}, {Edge{3, 6}}});
    const auto cfg = make_cfg(3, 2, {1.0, 1.0}, 0);
    const auto tree = build_cascade(g, cfg);
    const auto& lvl2 = tree.giant(2, 0);
    REQUIRE(lvl2.present);
    CHECK(lvl2.member_slots == std::vector<std::uint32_t>{1, 2});
    CHECK(lvl2.points == 4);
    CHECK(tree.chain_depth() == 1);
    CHECK(cascade_percolates(tree, 1));
    CHECK_FALSE(cascade_percolates(tree, 2));
    CHECK(tree.cascade_points(2) == 4); // the ball's giant exists; 0 is outside it
}

TEST_CASE("0 isolated at level 1 breaks every depth") {
    HierSpace sp(3, 1);
    SampledGraph g(sp, {{Edge{1, 2}}});
    const auto cfg = make_cfg(3, 1, {1.0}, 0);
    const auto tree = build_cascade(g, cfg);
    CHECK(tree.chain_depth() == 0);
    CHECK(cascade_percolates(tree, 0));
    CHECK_FALSE(cascade_percolates(tree, 1));
    CHECK_THROWS_AS(tree.chain_intact(2), ConfigError);
}

TEST_CASE("singleton largest cluster is recorded as no-giant") {
    HierSpace sp(3, 2);
    // only one 1-ball develops a giant; no class-2 edges between giants
    SampledGraph g(sp, {{Edge{0, 1}}, {}});
    const auto cfg = make_cfg(3, 2, {1.0, 1.0}, 0);
    const auto tree = build_cascade(g, cfg);
    CHECK(tree.giant(1, 0).present);
    CHECK_FALSE(tree.giant(2, 0).present);
    CHECK(tree.cascade_points(2) == 0);
    CHECK(tree.chain_depth() == 1);
}

TEST_CASE("cascade consistency invariants on random graphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto cfg = make_cfg(12, 3, {3.0, 3.0, 3.0}, 9100 + seed);
        const auto g = sample_graph(cfg);
        const auto tree = build_cascade(g, cfg);
        const HierSpace sp = g.space();
        for (std::uint32_t k = 2; k <= 3; ++k) {
            for (std::uint64_t b = 0; b < sp.ball_count(k); ++b) {
                const auto& gi = tree.giant(k, b);
                if (!gi.present) continue;
                CHECK(gi.members >= 2);
                CHECK(gi.members == gi.member_slots.size());
                std::uint64_t sum = 0;
                for (auto s : gi.member_slots) {
                    const auto& sub = tree.giant(k - 1, b * sp.order() + s);
                    CHECK(sub.present);
                    sum += sub.points;
                }
                CHECK(gi.points == sum);
                CHECK(gi.points > 0);
                CHECK(gi.points <= sp.ball_size(k));
                // membership map agrees with the recorded point count
                std::uint64_t marked = 0;
                const VertexId base = sp.ball_base(BallId{k, b});
                for (std::uint64_t off = 0; off < sp.ball_size(k); ++off)
                    if (tree.depth_of(base + off) >= k) ++marked;
                CHECK(marked == gi.points);
            }
        }
        // cascade percolation implies plain connectivity to distance K
        const auto diag = diagnose_cascade(g, tree);
        if (diag.cascade_percolates) CHECK(diag.plain_percolates);
    }
}

TEST_CASE("level summaries expose the 0-chain records") {
    const auto cfg = make_cfg(20, 2, {4.0, 4.0}, 314159);
    const auto g = sample_graph(cfg);
    const auto tree = build_cascade(g, cfg);
    const auto rows = tree.summary();
    REQUIRE(rows.size() == 2);
    for (std::uint32_t k = 1; k <= 2; ++k) {
        const auto& row = rows[k - 1];
        CHECK(row.level == k);
        CHECK(row.giant_present == tree.giant(k, 0).present);
        CHECK(row.giant_members == tree.giant(k, 0).members);
        CHECK(row.cascade_points == tree.cascade_points(k));
        CHECK(row.chain_intact == tree.chain_intact(k));
    }
}

TEST_CASE("cascade point fraction approaches the product of fixed points") {
    const std::vector<double> c{5.0, 5.0};
    const auto rec = theory::beta_recursion(std::span<const double>(c), 2);
    REQUIRE(rec.ok());
    const double predicted = rec.product(2); // ~0.98558

    const int trials = 200;
    double sum = 0.0;
    int present = 0;
    for (int t = 0; t < trials; ++t) {
        const auto cfg = make_cfg(100, 2, {5.0, 5.0}, 40000 + t);
        const auto g = sample_graph(cfg);
        const auto tree = build_cascade(g, cfg);
        if (!tree.giant(2, 0).present) continue;
        ++present;
        sum += static_cast<double>(tree.cascade_points(2)) / 10000.0;
    }
    REQUIRE(present > trials * 9 / 10);
    const double mean = sum / present;
    CHECK(std::abs(mean - predicted) / predicted < 0.03);
}

TEST_CASE("giant frequency at one level matches the fixed point") {
    const double beta = theory::solve_fixed_point(3.0);
    const int trials = 150;
    int intact = 0;
    for (int t = 0; t < trials; ++t) {
        const auto cfg = make_cfg(2000, 1, {3.0}, 60000 + t);
        const auto g = sample_graph(cfg);
        const auto tree = build_cascade(g, cfg);
        if (tree.chain_intact(1)) ++intact;
    }
    const double freq = static_cast<double>(intact) / trials;
    CHECK(std::abs(freq - beta) < 0.05);
}
