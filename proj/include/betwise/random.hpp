#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace betwise {

// Deterministic counter-style mixer used for seeding and key derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// xoshiro256** generator. Self-contained so draw sequences are identical
/// across platforms and standard-library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x = splitmix64(x);
            word = x;
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform draw in (0, 1); never returns 0 so logs stay finite.
    double uniform_positive() {
        double u = uniform();
        while (u == 0.0) u = uniform();
        return u;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

/// Value-semantic derivation key for reproducible stream trees. Runs obtain
/// independent streams by chaining labels/indices off a root seed, so results
/// do not depend on scheduling order.
class StreamKey {
public:
    static StreamKey root(std::uint64_t seed) { return StreamKey(splitmix64(seed ^ 0x5bd1e995u)); }

    StreamKey with(std::string_view label) const {
        return StreamKey(splitmix64(state_ ^ fnv1a64(label)));
    }

    StreamKey with(std::uint64_t index) const {
        return StreamKey(splitmix64(state_ ^ (index * 0x9e3779b97f4a7c15ULL + 1)));
    }

    RandomStream stream() const { return RandomStream(state_); }

    std::uint64_t value() const { return state_; }

private:
    explicit StreamKey(std::uint64_t state) : state_(state) {}

    std::uint64_t state_;
};

}  // namespace betwise
