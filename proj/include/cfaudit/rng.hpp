#ifndef CFAUDIT_RNG_HPP
#define CFAUDIT_RNG_HPP

#include "cfaudit/rational.hpp"

#include <cstdint>
#include <span>

namespace cfaudit {

/**
 * The one random generator used anywhere in this library: SplitMix64.
 *
 * Every randomized operation takes an explicit seed and derives one
 * independent stream per work item (per drawn example, per test case), so
 * serial and parallel runs of the same operation produce identical output.
 */
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// 64-bit finalizer (the SplitMix64 output function applied once).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stream for work item `index` under `seed`: state = mix64(seed ^ mix64(index + 1)).
inline SplitMix64 make_stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64{mix64(seed ^ mix64(index + 1))};
}

/// Uniform draw from {lo, ..., hi} by modulo reduction.
inline std::int64_t bounded(SplitMix64& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(rng.next() % span);
}

/**
 * Draws an index from an exact pmf (masses must sum to 1).
 *
 * The draw takes the top 62 bits of one SplitMix64 output as u, forms
 * r = u / 2^62, and returns the first index (in pmf order, skipping
 * zero-mass entries) whose running cumulative mass exceeds r. The
 * comparison is exact rational comparison, so a drawn index always has
 * strictly positive mass.
 */
inline std::size_t draw_index(SplitMix64& rng, std::span<const Rat> pmf) {
    constexpr std::int64_t kScale = 1ll << 62;
    const Rat r(static_cast<std::int64_t>(rng.next() >> 2), kScale);
    Rat cumulative(0);
    std::size_t last_positive = pmf.size();
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        if (pmf[i].is_zero()) continue;
        last_positive = i;
        cumulative += pmf[i];
        if (r < cumulative) return i;
    }
    return last_positive; // r landed inside rounding of the final step
}

} // namespace cfaudit

#endif
