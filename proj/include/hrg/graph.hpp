#pragma once

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include <hrg/address.hpp>
#include <hrg/config.hpp>
#include <hrg/errors.hpp>
#include <hrg/rng.hpp>

namespace hrg {

struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

namespace detail {

// Stream namespaces under a trial seed: (kGraphStream, class, ball) for the
// in-truncation sampler, (kExternalStream, class) for ball-external links.
inline constexpr std::uint64_t kGraphStream = 0x67726170685F6564ULL;
inline constexpr std::uint64_t kExternalStream = 0x6578745F6C696E6BULL;
inline constexpr std::uint64_t kTrialStream = 0x747269616C5F6964ULL;

struct PairKeyHash {
    std::size_t operator()(u128 key) const noexcept {
        std::uint64_t lo = static_cast<std::uint64_t>(key);
        std::uint64_t hi = static_cast<std::uint64_t>(key >> 64);
        std::uint64_t h = hi * 0x9e3779b97f4a7c15ULL ^ lo;
        return static_cast<std::size_t>(splitmix64(h));
    }
};

} // namespace detail

/// Derived seed for trial `index` under a master seed; experiments hand these
/// to sample_graph so that (trial, class, ball) streams never collide.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return StreamRng::derive_key(master, {detail::kTrialStream, index});
}

/// The sampled edge set of a depth-K truncation, grouped by distance class and
/// sorted within each class. Immutable after construction.
class SampledGraph {
public:
    /// Validates: endpoints in range, u < v, every class-k pair at distance
    /// exactly k, classes sorted and duplicate-free.
    SampledGraph(HierSpace space, std::vector<std::vector<Edge>> edges_by_class)
        : space_(space), by_class_(std::move(edges_by_class)) {
        if (by_class_.size() != space_.depth())
            throw ConfigError("edge container must have one slot per class 1..K");
        for (std::uint32_t k = 1; k <= space_.depth(); ++k) {
            const auto& list = by_class_[k - 1];
            for (std::size_t i = 0; i < list.size(); ++i) {
                const Edge& e = list[i];
                if (e.u >= e.v || e.v >= space_.size())
                    throw ConfigError("edge endpoints out of range or unordered");
                if (space_.distance(e.u, e.v) != k)
                    throw ConfigError("class-" + std::to_string(k) +
                                      " edge endpoints are not at distance " + std::to_string(k));
                if (i > 0 && !(list[i - 1] < e))
                    throw ConfigError("class edge list must be sorted and duplicate-free");
            }
        }
    }

    const HierSpace& space() const noexcept { return space_; }
    std::uint64_t vertex_count() const noexcept { return space_.size(); }

    std::span<const Edge> class_edges(std::uint32_t k) const {
        if (k < 1 || k > space_.depth()) throw ConfigError("distance class out of range");
        return by_class_[k - 1];
    }

    std::uint64_t edge_count() const noexcept {
        std::uint64_t n = 0;
        for (const auto& list : by_class_) n += list.size();
        return n;
    }

    /// Class-k edges whose endpoints lie inside `ball` (for k <= ball.level
    /// an edge is inside iff its first endpoint is). O(log E) + span.
    std::span<const Edge> class_edges_in_ball(std::uint32_t k, const BallId& ball) const {
        if (k > ball.level) throw ConfigError("class exceeds ball level");
        const auto edges = class_edges(k);
        const VertexId base = space_.ball_base(ball);
        const VertexId end = base + space_.ball_size(ball.level);
        const auto lo = std::lower_bound(edges.begin(), edges.end(), Edge{base, 0});
        const auto hi = std::lower_bound(edges.begin(), edges.end(), Edge{end, 0});
        return {lo, hi};
    }

    /// Total degree of v; O(E) scan, intended for small graphs and spot checks.
    std::uint64_t degree_of(VertexId v) const {
        if (v >= vertex_count()) throw ConfigError("vertex id out of range");
        std::uint64_t d = 0;
        for (std::uint32_t k = 1; k <= space_.depth(); ++k) d += degree_of(v, k);
        return d;
    }

    /// Class-k degree of v: the realization of Y^(k) for that vertex.
    std::uint64_t degree_of(VertexId v, std::uint32_t k) const {
        if (v >= vertex_count()) throw ConfigError("vertex id out of range");
        std::uint64_t d = 0;
        for (const Edge& e : class_edges(k)) d += (e.u == v) + (e.v == v);
        return d;
    }

    /// Per-vertex class-k degrees in one pass. Requires the vertex array to be
    /// materializable.
    std::vector<std::uint32_t> class_degree_counts(std::uint32_t k) const {
        if (vertex_count() > (std::uint64_t{1} << 28))
            throw ConfigError("graph too large for a dense degree array");
        std::vector<std::uint32_t> deg(vertex_count(), 0);
        for (const Edge& e : class_edges(k)) {
            ++deg[e.u];
            ++deg[e.v];
        }
        return deg;
    }

private:
    HierSpace space_;
    std::vector<std::vector<Edge>> by_class_;
};

namespace detail {

/// Number of vertex pairs at distance exactly k inside one level-k ball:
/// N^(2(k-1)) * N(N-1)/2. 128-bit: it may exceed 2^64 while N^K < 2^63.
inline u128 pairs_in_class_ball(const HierSpace& space, std::uint32_t k) {
    const u128 sub = space.ball_size(k - 1);
    const u128 n = space.order();
    return sub * sub * (n * (n - 1) / 2);
}

/// Sample the class-k edges of one level-k ball. Counts are exact binomial;
/// endpoint pairs are uniform without replacement (two distinct sub-balls,
/// a uniform offset in each, duplicates rejected). Small pair universes are
/// enumerated and partially shuffled instead, which covers the dense cases.
inline void sample_ball_class(const HierSpace& space, std::uint32_t k, std::uint64_t ball,
                              double p, StreamRng rng, std::vector<Edge>& out) {
    out.clear();
    const std::uint64_t base = ball * space.ball_size(k);
    const std::uint64_t sub = space.ball_size(k - 1);
    const std::uint32_t n = space.order();
    const u128 pairs = pairs_in_class_ball(space, k);
    const std::uint64_t m = binomial_draw(rng, pairs, p);
    if (m == 0) return;

    if (pairs <= 4096) {
        std::vector<Edge> all;
        all.reserve(static_cast<std::size_t>(pairs));
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j)
                for (std::uint64_t oi = 0; oi < sub; ++oi)
                    for (std::uint64_t oj = 0; oj < sub; ++oj)
                        all.push_back(Edge{base + i * sub + oi, base + j * sub + oj});
        for (std::uint64_t t = 0; t < m; ++t) {
            const std::uint64_t pick = t + rng.uniform_below(all.size() - t);
            std::swap(all[t], all[pick]);
        }
        all.resize(m);
        out = std::move(all);
    } else {
        std::unordered_set<u128, PairKeyHash> seen;
        seen.reserve(m * 2);
        out.reserve(m);
        while (out.size() < m) {
            const std::uint32_t i = static_cast<std::uint32_t>(rng.uniform_below(n));
            std::uint32_t j = static_cast<std::uint32_t>(rng.uniform_below(n - 1));
            if (j >= i) ++j;
            std::uint64_t a = base + i * sub + rng.uniform_below(sub);
            std::uint64_t b = base + j * sub + rng.uniform_below(sub);
            if (a > b) std::swap(a, b);
            const u128 key = (static_cast<u128>(a) << 64) | b;
            if (seen.insert(key).second) out.push_back(Edge{a, b});
        }
    }
    std::sort(out.begin(), out.end());
#ifndef NDEBUG
    for (const Edge& e : out) assert(space.distance(e.u, e.v) == k);
#endif
}

} // namespace detail

struct SampleOptions {
    /// Highest distance class to sample; 0 means all classes 1..K. Experiments
    /// that only consume a prefix of classes declare it here.
    std::uint32_t max_class = 0;
    std::uint32_t threads = 1;
};

/// Sample the random edge set of cfg's truncation. Deterministic in
/// (cfg.seed, cfg) and independent of the thread count: every (class, ball)
/// work item draws from its own derived stream.
inline SampledGraph sample_graph(const GraphConfig& cfg, const SampleOptions& opt = {}) {
    cfg.validate();
    const HierSpace space = cfg.space();
    const std::uint32_t top = opt.max_class == 0 ? space.depth()
                                                 : std::min(opt.max_class, space.depth());

    struct Item {
        std::uint32_t k;
        std::uint64_t ball;
    };
    std::vector<Item> items;
    for (std::uint32_t k = 1; k <= top; ++k)
        for (std::uint64_t b = 0; b < space.ball_count(k); ++b) items.push_back({k, b});

    std::vector<std::vector<Edge>> slots(items.size());
    auto run_item = [&](std::size_t idx) {
        const auto [k, ball] = items[idx];
        StreamRng rng(StreamRng::derive_key(cfg.seed, {detail::kGraphStream, k, ball}));
        detail::sample_ball_class(space, k, ball, cfg.edge_prob(k), rng, slots[idx]);
    };

    if (opt.threads <= 1 || items.size() <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) run_item(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= items.size()) break;
                run_item(i);
            }
        };
        std::vector<std::thread> pool;
        const std::uint32_t nt = std::min<std::uint32_t>(opt.threads, 64);
        pool.reserve(nt);
        for (std::uint32_t t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<std::vector<Edge>> by_class(space.depth());
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto& dst = by_class[items[i].k - 1];
        dst.insert(dst.end(), slots[i].begin(), slots[i].end());
    }
    // Ball ranges are disjoint and consumed in ball order, so each class is
    // already sorted; keep the sort as a cheap structural guarantee.
    for (auto& list : by_class) std::sort(list.begin(), list.end());
    return SampledGraph(space, std::move(by_class));
}

/// A 1-step connection from a point of a focus ball to the outside.
/// `point` is the local vertex id inside the level-k focus ball (the ball
/// containing 0); `peer` is the other endpoint's id within the level-cls ball
/// that shares its suffix with the focus ball. d(point, peer) = cls.
struct ExternalLink {
    std::uint64_t point = 0;
    std::uint32_t cls = 0;
    std::uint64_t peer = 0;
    friend auto operator<=>(const ExternalLink&, const ExternalLink&) = default;
};

/// Sample all external 1-step connections of classes level+1..K incident to
/// the level-`level` ball containing 0, without materializing the rest of the
/// truncation. Exact: the incident pairs form an independent Bernoulli family
/// of size N^level * (N^j - N^(j-1)) per class j.
inline std::vector<ExternalLink> sample_external_links(const GraphConfig& cfg,
                                                       std::uint32_t level) {
    cfg.validate();
    const HierSpace space = cfg.space();
    if (level >= space.depth()) throw ConfigError("focus ball level must be below K");
    const std::uint64_t ball_points = space.ball_size(level);
    std::vector<ExternalLink> out;
    for (std::uint32_t j = level + 1; j <= space.depth(); ++j) {
        StreamRng rng(StreamRng::derive_key(cfg.seed, {detail::kExternalStream, j}));
        const std::uint64_t subs = space.ball_size(j - 1);
        const u128 pairs = static_cast<u128>(ball_points) *
                           (static_cast<u128>(space.ball_size(j)) - subs);
        const std::uint64_t m = binomial_draw(rng, pairs, cfg.edge_prob(j));
        std::unordered_set<u128, detail::PairKeyHash> seen;
        seen.reserve(m * 2);
        std::vector<ExternalLink> links;
        links.reserve(m);
        while (links.size() < m) {
            const std::uint64_t point = rng.uniform_below(ball_points);
            // The focus ball has digit j = 0, so any nonzero top digit lands
            // the peer at distance exactly j.
            const std::uint64_t d = 1 + rng.uniform_below(space.order() - 1);
            const std::uint64_t peer = d * subs + rng.uniform_below(subs);
            const u128 key = (static_cast<u128>(point) << 64) | peer;
            if (seen.insert(key).second) links.push_back(ExternalLink{point, j, peer});
        }
        std::sort(links.begin(), links.end());
        out.insert(out.end(), links.begin(), links.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Edge-list dump format: header "N K", then one line "u v k" per edge.
// ---------------------------------------------------------------------------

inline void dump_graph(const SampledGraph& g, std::ostream& os) {
    os << g.space().order() << ' ' << g.space().depth() << '\n';
    for (std::uint32_t k = 1; k <= g.space().depth(); ++k)
        for (const Edge& e : g.class_edges(k)) os << e.u << ' ' << e.v << ' ' << k << '\n';
}

/// Re-read a dump, validating ids, classes and d(u, v) = k on every line.
inline SampledGraph parse_graph_dump(std::istream& is) {
    std::uint64_t order = 0;
    std::uint32_t depth = 0;
    if (!(is >> order >> depth)) throw ConfigError("dump header must be 'N K'");
    if (order < 2 || order > 0xFFFFFFFFull) throw ConfigError("dump header order out of range");
    HierSpace space(static_cast<std::uint32_t>(order), depth);
    std::vector<std::vector<Edge>> by_class(depth);
    std::uint64_t u = 0, v = 0;
    std::uint32_t k = 0;
    while (is >> u >> v >> k) {
        if (k < 1 || k > depth) throw ConfigError("edge class out of range in dump");
        if (u >= v) throw ConfigError("dump edges must satisfy u < v");
        by_class[k - 1].push_back(Edge{u, v});
    }
    if (!is.eof() && is.fail()) throw ConfigError("malformed edge line in dump");
    for (auto& list : by_class) std::sort(list.begin(), list.end());
    return SampledGraph(space, std::move(by_class)); // validates distances
}

} // namespace hrg
