#pragma once

// SplitMix64 streams. Used for reproducible per-vertex configuration
// sampling and for the randomized test generators. The derivation is fixed:
// a vertex key is mixed into the master seed and the result seeds an
// independent stream.

#include <cstdint>

namespace rotor {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return splitmix64(state_); }

    /// Uniform draw in [0, n) by rejection, bias-free.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t bound = (0ULL - n) % n; // 2^64 mod n
        for (;;) {
            std::uint64_t r = next();
            if (r >= bound) return r % n;
        }
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Stateless scramble of a single word.
inline std::uint64_t mix64(std::uint64_t x) {
    return splitmix64(x);
}

/// Key derivation for independent streams: stream(seed, key) starts a fresh
/// SplitMix64 sequence at a point that depends on both inputs.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t key) {
    std::uint64_t s = seed ^ (key * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL);
    // one scramble round so that nearby keys do not give nearby states
    return splitmix64(s);
}

} // namespace rotor
