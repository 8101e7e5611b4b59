#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace connbench {

// splitmix64 finalizer. Bijective on 64-bit words, good avalanche; used both
// for seeding xoshiro state and as the mixing step when deriving sub-streams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64_next(s);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derive an independent sub-stream seed from a parent seed, a label and any
// number of integer indices. Collisions between distinct (label, indices)
// tuples are what we care about, not cryptographic strength.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    return mix64(seed, fnv1a64(label));
}

template <class... Ix>
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, Ix... idx) {
    std::uint64_t h = mix64(seed, fnv1a64(label));
    ((h = mix64(h, static_cast<std::uint64_t>(idx))), ...);
    return h;
}

// xoshiro256++ with splitmix64 state expansion.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        for (auto& w : s_) w = splitmix64_next(seed);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

// Standard normal draws via the polar (rejection) form of Box-Muller.
// Each accepted pair yields two deviates; the second is cached.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * rng_.uniform() - 1.0;
            v = 2.0 * rng_.uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        has_cached_ = true;
        return u * f;
    }

    RngStream& raw() { return rng_; }

private:
    RngStream rng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace connbench
