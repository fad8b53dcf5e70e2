#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace hrg {

using u128 = unsigned __int128;

/// SplitMix64 step (Steele, Lea & Flood; Vigna's constants). Used both as a
/// key mixer for stream derivation and to expand a key into generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Splittable stream generator: xoshiro256++ (Blackman & Vigna) seeded from a
/// 64-bit key via SplitMix64.
///
/// Stream derivation contract: a work item tagged (t1, t2, ...) under a master
/// seed draws from StreamRng(derive_key(master, {t1, t2, ...})). Keys absorb
/// each tag with one SplitMix64 step, so every (trial, class, ball) tuple gets
/// an independent stream and results do not depend on scheduling order.
class StreamRng {
public:
    explicit StreamRng(std::uint64_t key) noexcept {
        std::uint64_t sm = key;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static std::uint64_t derive_key(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> tags) noexcept {
        std::uint64_t key = master;
        (void)splitmix64(key);
        for (std::uint64_t t : tags) {
            key ^= t;
            (void)splitmix64(key);
        }
        return key;
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_double_open() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, n) by rejection.
    std::uint64_t uniform_below(std::uint64_t n) noexcept {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

/// Exact Binomial(n, p) sample. Inversion (BINV) when the mean is small;
/// otherwise geometric waiting-time jumps, which stay exact for any n (no
/// normal approximation anywhere). n is 128-bit because per-ball pair counts
/// can exceed 2^64 even when N^K < 2^63.
inline std::uint64_t binomial_draw(StreamRng& rng, u128 n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return static_cast<std::uint64_t>(n);
    if (p > 0.5) {
        // Complement keeps the success probability small; all uses here have
        // tiny p, so this branch only matters for toy configurations.
        return static_cast<std::uint64_t>(n) - binomial_draw(rng, n, 1.0 - p);
    }
    const double nd = static_cast<double>(n);
    const double mean = nd * p;
    if (mean <= 30.0) {
        // BINV: sequential search of the cdf from 0.
        const double s = p / (1.0 - p);
        double f = std::exp(nd * std::log1p(-p));
        double cdf = f;
        const double u = rng.next_double();
        std::uint64_t k = 0;
        // Residual mass past the cutoff is far below double resolution.
        const std::uint64_t cap = static_cast<std::uint64_t>(mean + 60.0 * std::sqrt(mean + 1.0) + 120.0);
        while (u > cdf && k < cap && f > 1e-300) {
            f *= s * (nd - static_cast<double>(k)) / (static_cast<double>(k) + 1.0);
            cdf += f;
            ++k;
        }
        return k;
    }
    // Geometric jumps: gaps between successes are Geometric(p).
    const double log_q = std::log1p(-p);
    std::uint64_t successes = 0;
    u128 consumed = 0;
    for (;;) {
        const double g = std::floor(std::log(rng.next_double_open()) / log_q);
        if (g >= 1.7e38) break; // beyond any representable n
        const u128 gap = static_cast<u128>(g);
        if (gap >= n - consumed) break;
        consumed += gap + 1;
        ++successes;
    }
    return successes;
}

} // namespace hrg
