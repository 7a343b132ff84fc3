#pragma once

// Pinned random-number construction shared by scenario generation and the
// Monte-Carlo simulator. Changing anything here changes every seeded output.
//
//   engine:   std::mt19937_64 (bit-exact across conforming standard libraries)
//   uniform:  u = (x >> 11) * 2^-53, so u lies in [0, 1) on a 53-bit grid
//   streams:  replicate r of a run seeded with s uses std::mt19937_64 seeded
//             with the (r+1)-th output of SplitMix64 started at state s

#include <cstdint>
#include <random>

namespace streak::rng {

using Engine = std::mt19937_64;

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Output number `index + 1` of a SplitMix64 generator whose state starts at `seed`.
constexpr std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64_mix(seed + (index + 1) * kGoldenGamma);
}

inline double unit_uniform(Engine& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline Engine stream_engine(std::uint64_t seed, std::uint64_t stream) {
    return Engine(splitmix64_at(seed, stream));
}

}  // namespace streak::rng
