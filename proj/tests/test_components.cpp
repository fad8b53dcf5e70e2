#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>
#include <vector>

#include <hrg/union_find.hpp>

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

/// Random edge set on n <= 16 vertices inside a single 1-ball.
std::vector<Edge> random_edges(std::uint32_t n, double p, StreamRng& rng) {
    std::vector<Edge> edges;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (rng.next_double() < p) edges.push_back(Edge{i, j});
    return edges;
}

bool same_partition(const ComponentLabeling& labeling, const std::vector<int>& labels) {
    for (std::size_t a = 0; a < labels.size(); ++a)
        for (std::size_t b = a + 1; b < labels.size(); ++b) {
            const bool uf_same = labeling.root_of(a) == labeling.root_of(b);
            const bool dfs_same = labels[a] == labels[b];
            if (uf_same != dfs_same) return false;
        }
    return true;
}

} // namespace

TEST_CASE("no edges: all singletons") {
    HierSpace sp(6, 1);
    SampledGraph g(sp, {{}});
    ComponentLabeling labeling(g, BallId{1, 0}, 1);
    CHECK(labeling.component_count() == 6);
    CHECK(labeling.giant_size() == 1);
    CHECK(labeling.second_largest_size() == 1);
    CHECK(labeling.giant_root() == 0); // tie-break: smallest vertex id
}

TEST_CASE("probability-1 graph is one component") {
    const auto g = sample_graph(make_cfg(4, 1, {4.0}, 3)); // p = 4/4 = 1
    ComponentLabeling labeling(g, BallId{1, 0}, 1);
    CHECK(labeling.component_count() == 1);
    CHECK(labeling.giant_size() == 4);
    CHECK(labeling.second_largest_size() == 0);
}

TEST_CASE("labeling equals brute-force DFS on random 8-vertex graphs") {
    HierSpace sp(8, 1);
    StreamRng rng(404);
    for (int t = 0; t < 500; ++t) {
        const auto edges = random_edges(8, 0.25, rng);
        SampledGraph g(sp, {edges});
        ComponentLabeling labeling(g, BallId{1, 0}, 1);
        std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
        for (const auto& e : edges) pairs.emplace_back(e.u, e.v);
        CHECK(same_partition(labeling, oracle::dfs_components(8, pairs)));
    }
}

TEST_CASE("labeling equals DFS on all sizes up to 12 over many seeds") {
    StreamRng rng(808);
    for (int t = 0; t < 3000; ++t) {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.uniform_below(11));
        HierSpace sp(n, 1);
        const double p = rng.next_double();
        const auto edges = random_edges(n, p, rng);
        SampledGraph g(sp, {edges});
        ComponentLabeling labeling(g, BallId{1, 0}, 1);
        std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
        for (const auto& e : edges) pairs.emplace_back(e.u, e.v);
        CHECK(same_partition(labeling, oracle::dfs_components(n, pairs)));
    }
}

TEST_CASE("adding an edge never shrinks the endpoints' components") {
    HierSpace sp(10, 1);
    StreamRng rng(2222);
    const auto edges = random_edges(10, 0.2, rng);
    for (std::size_t prefix = 1; prefix <= edges.size(); ++prefix) {
        std::vector<Edge> before(edges.begin(), edges.begin() + prefix - 1);
        std::vector<Edge> after(edges.begin(), edges.begin() + prefix);
        ComponentLabeling a(SampledGraph(sp, {before}), BallId{1, 0}, 1);
        ComponentLabeling b(SampledGraph(sp, {after}), BallId{1, 0}, 1);
        const Edge& e = edges[prefix - 1];
        CHECK(b.component_size(e.u) >= a.component_size(e.u));
        CHECK(b.component_size(e.v) >= a.component_size(e.v));
    }
}

TEST_CASE("components_within_ball restricts to the ball and the class prefix") {
    HierSpace sp(3, 2);
    // class-1 edges in ball 0 and ball 1; one class-2 edge across
    SampledGraph g(sp, {{Edge{0, 1}, Edge{3, 4}}, {Edge{1, 3}}});
    ComponentLabeling ball0(g, BallId{1, 0}, 1);
    CHECK(ball0.component_size(0) == 2);
    CHECK(ball0.component_size(2) == 1);

    ComponentLabeling whole_no2(g, BallId{2, 0}, 1);
    CHECK(whole_no2.component_size(0) == 2); // class-2 edge not consumed
    ComponentLabeling whole(g, BallId{2, 0}, 2);
    CHECK(whole.component_size(0) == 4); // {0,1} + {3,4} joined

    CHECK_THROWS_AS(ComponentLabeling(g, BallId{1, 0}, 2), ConfigError);
}

TEST_CASE("small-component bound: arithmetic and degenerate cases") {
    const auto g = sample_graph(make_cfg(4, 1, {4.0}, 3));
    ComponentLabeling complete(g, BallId{1, 0}, 1);
    const auto rep = small_component_bound_check(complete, 3.0, 2000);
    CHECK(rep.second_largest == 0);
    CHECK(rep.within);
    CHECK_THAT(rep.bound, Catch::Matchers::WithinAbs(91.2108295145050, 1e-8));

    const auto rep15 = small_component_bound_check(complete, 1.5, 2000);
    CHECK_THAT(rep15.bound, Catch::Matchers::WithinAbs(729.6866361160399, 1e-8));

    CHECK_THROWS_AS(small_component_bound_check(complete, 1.0, 2000), DomainError);
    CHECK_THROWS_AS(small_component_bound_check(complete, 0.5, 2000), DomainError);
}

TEST_CASE("small-component bound holds in almost every supercritical trial") {
    const std::uint32_t N = 2000;
    int within = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        const auto g = sample_graph(make_cfg(N, 1, {3.0}, 100000 + t));
        ComponentLabeling labeling(g, BallId{1, 0}, 1);
        if (small_component_bound_check(labeling, 3.0, N).within) ++within;
    }
    CHECK(static_cast<double>(within) / trials >= 0.99);
}
