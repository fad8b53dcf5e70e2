#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include <hrg/errors.hpp>
#include <hrg/graph.hpp>

namespace hrg {

/// Flat union-find with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(std::uint64_t n) : comps_(static_cast<std::uint32_t>(n)) {
        if (n > 0xFFFFFFFFull) throw ConfigError("union-find universe exceeds 2^32 elements");
        parent_.resize(n);
        size_.assign(n, 1);
        for (std::uint32_t i = 0; i < n; ++i) parent_[i] = i;
    }

    std::uint32_t find(std::uint32_t x) noexcept {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::uint32_t a, std::uint32_t b) noexcept {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --comps_;
        return true;
    }

    std::uint32_t size_of(std::uint32_t x) noexcept { return size_[find(x)]; }
    std::uint32_t component_count() const noexcept { return comps_; }
    std::uint32_t universe() const noexcept { return static_cast<std::uint32_t>(parent_.size()); }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::uint32_t comps_;
};

/// Connected components of the subgraph induced on one ball by the edges of
/// classes 1..max_class. Fully compressed on construction, immutable after,
/// so lookups are const and shareable across threads.
///
/// Giant tie-break: among maximum-size components, the one containing the
/// smallest vertex id.
class ComponentLabeling {
public:
    ComponentLabeling(const SampledGraph& g, BallId ball, std::uint32_t max_class)
        : base_(g.space().ball_base(ball)), uf_(g.space().ball_size(ball.level)) {
        if (max_class > ball.level) throw ConfigError("max_class exceeds ball level");
        for (std::uint32_t k = 1; k <= max_class; ++k)
            for (const Edge& e : g.class_edges_in_ball(k, ball))
                uf_.unite(local(e.u), local(e.v));
        finalize();
    }

    VertexId base() const noexcept { return base_; }
    std::uint64_t size() const noexcept { return uf_.universe(); }

    std::uint32_t local(VertexId v) const noexcept { return static_cast<std::uint32_t>(v - base_); }

    std::uint32_t root_of(VertexId v) const noexcept { return roots_[local(v)]; }
    std::uint64_t component_size(VertexId v) const noexcept { return sizes_[root_of(v)]; }
    std::uint64_t component_count() const noexcept { return comps_; }

    std::uint64_t giant_size() const noexcept { return giant_size_; }
    std::uint32_t giant_root() const noexcept { return giant_root_; }
    bool in_giant(VertexId v) const noexcept { return root_of(v) == giant_root_; }
    std::uint64_t second_largest_size() const noexcept { return second_size_; }

private:
    void finalize() {
        const std::uint32_t n = uf_.universe();
        roots_.resize(n);
        sizes_.assign(n, 0);
        for (std::uint32_t i = 0; i < n; ++i) {
            roots_[i] = uf_.find(i);
            if (roots_[i] == i) sizes_[i] = uf_.size_of(i);
        }
        comps_ = uf_.component_count();
        for (std::uint32_t i = 0; i < n; ++i) giant_size_ = std::max(giant_size_, sizes_[i]);
        for (std::uint32_t i = 0; i < n; ++i) {
            if (sizes_[roots_[i]] == giant_size_) {
                giant_root_ = roots_[i]; // first hit = component of the smallest id
                break;
            }
        }
        for (std::uint32_t i = 0; i < n; ++i)
            if (sizes_[i] > 0 && i != giant_root_) second_size_ = std::max(second_size_, sizes_[i]);
    }

    VertexId base_;
    UnionFind uf_;
    std::vector<std::uint32_t> roots_;
    std::vector<std::uint64_t> sizes_; // root-indexed
    std::uint64_t comps_ = 0;
    std::uint64_t giant_size_ = 0;
    std::uint32_t giant_root_ = 0;
    std::uint64_t second_size_ = 0;
};

inline ComponentLabeling components_within_ball(const SampledGraph& g, BallId ball,
                                                std::uint32_t max_class) {
    return ComponentLabeling(g, ball, max_class);
}

/// Check of the small-component size bound 16c/(c-1)^2 * log N against the
/// observed second-largest component. The bound is an a.a.s. statement, so a
/// violation at small N is reported, not fatal.
struct SmallComponentReport {
    double bound = 0.0;
    std::uint64_t second_largest = 0;
    bool within = false;
};

inline SmallComponentReport small_component_bound_check(const ComponentLabeling& labeling,
                                                        double c, std::uint64_t N) {
    if (!(c > 1.0)) throw DomainError("small-component bound requires c > 1");
    SmallComponentReport rep;
    rep.bound = 16.0 * c / ((c - 1.0) * (c - 1.0)) * std::log(static_cast<double>(N));
    rep.second_largest = labeling.second_largest_size();
    rep.within = static_cast<double>(rep.second_largest) <= rep.bound;
    return rep;
}

} // namespace hrg
