#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include <hrg/errors.hpp>

namespace hrg {

using VertexId = std::uint64_t;

/// A level-k ball: the set of N^k vertices sharing all digits above position k.
/// `suffix` encodes those shared digits, so suffix ranges over [0, N^(K-k)).
struct BallId {
    std::uint32_t level = 0;
    std::uint64_t suffix = 0;

    friend bool operator==(const BallId&, const BallId&) = default;
};

/// Geometry of the depth-K truncation of the order-N hierarchical group.
///
/// Vertices are integer ids in [0, N^K); digit i (1-indexed, least significant
/// first) is the i-th coordinate. Storing digits least-significant-first makes
/// the enclosing level-k ball a single integer division by N^k. Configurations
/// with N^K >= 2^63 are rejected so that ids stay flat 64-bit integers.
class HierSpace {
public:
    HierSpace(std::uint32_t order, std::uint32_t depth) : order_(order), depth_(depth) {
        if (order < 2) throw ConfigError("hierarchical order N must be >= 2");
        if (depth < 1) throw ConfigError("truncation depth K must be >= 1");
        pow_.assign(depth + 1u, 1);
        constexpr std::uint64_t limit = std::uint64_t{1} << 63;
        for (std::uint32_t i = 1; i <= depth; ++i) {
            if (pow_[i - 1] >= (limit + order - 1) / order)
                throw ConfigError("N^K must be below 2^63; reduce N or K");
            pow_[i] = pow_[i - 1] * order;
        }
    }

    std::uint32_t order() const noexcept { return order_; }
    std::uint32_t depth() const noexcept { return depth_; }

    /// N^k, valid for k <= K.
    std::uint64_t pow_order(std::uint32_t k) const noexcept {
        assert(k <= depth_);
        return pow_[k];
    }
    std::uint64_t size() const noexcept { return pow_[depth_]; }

    std::uint64_t ball_size(std::uint32_t level) const noexcept { return pow_order(level); }
    std::uint64_t ball_count(std::uint32_t level) const noexcept {
        assert(level <= depth_);
        return pow_[depth_ - level];
    }

    std::uint32_t digit(VertexId v, std::uint32_t i) const noexcept {
        assert(i >= 1 && i <= depth_);
        return static_cast<std::uint32_t>((v / pow_[i - 1]) % order_);
    }

    /// Hierarchical (ultrametric) distance: the largest differing coordinate,
    /// equivalently the smallest k with floor(a/N^k) == floor(b/N^k).
    std::uint32_t distance(VertexId a, VertexId b) const noexcept {
        assert(a < size() && b < size());
        std::uint32_t d = 0;
        while (a != b) {
            a /= order_;
            b /= order_;
            ++d;
        }
        return d;
    }

    BallId ball_of(VertexId v, std::uint32_t k) const {
        if (k > depth_) throw ConfigError("ball level exceeds truncation depth");
        assert(v < size());
        return BallId{k, v / pow_[k]};
    }

    VertexId ball_base(const BallId& b) const noexcept {
        assert(b.level <= depth_ && b.suffix < ball_count(b.level));
        return b.suffix * pow_[b.level];
    }

    bool ball_contains(const BallId& b, VertexId v) const noexcept {
        return v / pow_[b.level] == b.suffix;
    }

    /// Componentwise addition mod N. Distance is invariant under it.
    VertexId add_mod(VertexId a, VertexId b) const noexcept {
        assert(a < size() && b < size());
        VertexId r = 0;
        for (std::uint32_t i = 0; i < depth_; ++i) {
            r += ((a % order_ + b % order_) % order_) * pow_[i];
            a /= order_;
            b /= order_;
        }
        return r;
    }

    friend bool operator==(const HierSpace& x, const HierSpace& y) noexcept {
        return x.order_ == y.order_ && x.depth_ == y.depth_;
    }

private:
    std::uint32_t order_;
    std::uint32_t depth_;
    std::vector<std::uint64_t> pow_; // pow_[i] = N^i
};

/// Digit-vector form of a vertex, least significant coordinate first.
struct HierAddress {
    std::uint32_t order = 2;
    std::vector<std::uint32_t> digits; // size K, each in [0, N-1]

    std::uint64_t encode() const {
        HierSpace sp(order, static_cast<std::uint32_t>(digits.size()));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (digits[i] >= order) throw ConfigError("address digit out of range");
            v += std::uint64_t{digits[i]} * sp.pow_order(static_cast<std::uint32_t>(i));
        }
        return v;
    }

    static HierAddress decode(std::uint64_t index, std::uint32_t order, std::uint32_t depth) {
        HierSpace sp(order, depth); // validates parameters
        if (index >= sp.size()) throw ConfigError("vertex index out of range");
        HierAddress a;
        a.order = order;
        a.digits.resize(depth);
        for (std::uint32_t i = 0; i < depth; ++i) {
            a.digits[i] = static_cast<std::uint32_t>(index % order);
            index /= order;
        }
        return a;
    }

    friend bool operator==(const HierAddress&, const HierAddress&) = default;
};

namespace detail {
inline void require_same_space(const HierAddress& a, const HierAddress& b) {
    if (a.order != b.order || a.digits.size() != b.digits.size())
        throw ConfigError("addresses live in different (N, K) truncations");
}
} // namespace detail

inline std::uint32_t distance(const HierAddress& a, const HierAddress& b) {
    detail::require_same_space(a, b);
    std::uint32_t d = 0;
    for (std::uint32_t i = 0; i < a.digits.size(); ++i)
        if (a.digits[i] != b.digits[i]) d = i + 1;
    return d;
}

inline HierAddress add_mod(const HierAddress& a, const HierAddress& b) {
    detail::require_same_space(a, b);
    HierAddress r = a;
    for (std::size_t i = 0; i < r.digits.size(); ++i)
        r.digits[i] = (a.digits[i] + b.digits[i]) % a.order;
    return r;
}

inline BallId ball_of(const HierAddress& a, std::uint32_t k) {
    HierSpace sp(a.order, static_cast<std::uint32_t>(a.digits.size()));
    return sp.ball_of(a.encode(), k);
}

} // namespace hrg
