#pragma once

#include <cstdint>

namespace fmc {

// SplitMix64: tiny, fast, and identical on every platform we build for.
// Planner determinism hangs off this generator, so no std::*_distribution
// (their draw algorithms are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30u)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27u)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31u);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11u) * 0x1.0p-53;
    }

    double uniform_real(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform index in [0, n). Lemire multiply-shift; bias is < 2^-64 per draw.
    std::size_t uniform_index(std::size_t n) {
        const auto wide = static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
        return static_cast<std::size_t>(wide >> 64u);
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

// Derives an independent stream from (seed, index); used to give each
// planning call inside an episode its own deterministic seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
    return r.next_u64();
}

}  // namespace fmc
