#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

#include <boost/random/normal_distribution.hpp>

#include "risloc/constants.hpp"

namespace risloc {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Order-sensitive 64-bit mix of a tuple of integers. Appending a component
/// never changes the hash of a shorter prefix's siblings.
constexpr std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
}

/// Fills `out` with i.i.d. circularly-symmetric complex Gaussians of the given
/// variance (real and imaginary parts each variance/2), real part drawn first.
inline void fill_complex_normal(Rng& rng, double variance, std::span<cd> out) {
    boost::random::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
    for (cd& v : out) {
        const double re = normal(rng);
        const double im = normal(rng);
        v = {re, im};
    }
}

}  // namespace risloc
