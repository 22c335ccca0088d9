#pragma once

// Seeded draws built only on the engine, whose output sequence is fixed by the
// standard; std distributions are implementation-defined and would make
// generated corpora and splits differ between standard libraries.

#include <cstdint>
#include <random>

namespace nagatag {

using Rng = std::mt19937_64;

/// Unbiased integer in [0, n). n must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = Rng::max() - (Rng::max() % n + 1) % n;
    std::uint64_t draw = rng();
    while (draw > limit) draw = rng();
    return draw % n;
}

/// Real in [0, 1) with 53 bits of resolution.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool coin_flip(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace nagatag
