#ifndef NCPS_RNG_HPP
#define NCPS_RNG_HPP

#include <cstdint>

namespace ncps {

// Counter-based uniform draws: every value is a pure function of
// (seed, stream, index), so generation order and threading never change
// results.

constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

/// Uniform on the open interval (0, 1).
constexpr double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const auto bits = counter_hash(seed, stream, index) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

/// Uniform on the open interval (lo, hi).
constexpr double uniform(double lo, double hi, std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t index) {
    return lo + (hi - lo) * uniform01(seed, stream, index);
}

}  // namespace ncps

#endif  // NCPS_RNG_HPP
