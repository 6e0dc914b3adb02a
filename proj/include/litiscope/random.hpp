#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace litiscope {

using Rng = std::mt19937_64;

/// Derives an independent seed for a named component. All randomness in the
/// library flows from one top-level seed through this function.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view component,
                                    std::uint64_t index = 0) noexcept {
    // FNV-1a over the component name, then splitmix64 finalization.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : component) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::uint64_t z = seed ^ h ^ (index * 0x9e3779b97f4a7c15ULL);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::string_view component, std::uint64_t index = 0) {
    return Rng(derive_seed(seed, component, index));
}

/// Uniform real in [0, 1) built from raw engine bits, so results do not depend on
/// the standard library's distribution implementation.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    // Lemire-free simple rejection keeps this exact and portable.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return static_cast<std::size_t>(r % n);
}

} // namespace litiscope
