#pragma once

#include <cstdint>
#include <random>

namespace ginn {

/// Maps one mt19937_64 draw to [0, 1) with the top 53 bits.
/// Used instead of std::uniform_real_distribution so that streams are
/// reproducible bit-for-bit across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw from [lo, hi).
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer from {lo, ..., hi} inclusive.
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng() % span);
}

} // namespace ginn
