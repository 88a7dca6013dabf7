#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gml/error.hpp"

namespace gml {

/// Deterministic 64-bit generator (SplitMix64, Steele et al. 2014).
///
/// Chosen over std::mt19937_64 because the algorithm is tiny, fully
/// specified, and counter-based: the same seed reproduces the same stream
/// bit-exactly on every platform and in every port of this code base.
/// All randomness in the library (splits, initialization, graph
/// generators, noise) flows through this type.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform index in [0, bound). Plain modulo reduction: the tiny bias is
    /// irrelevant at desk scale and the mapping stays portable.
    std::size_t next_index(std::size_t bound) {
        if (bound == 0) throw ParameterError("next_index: bound must be positive");
        return static_cast<std::size_t>(next_u64() % bound);
    }

    /// Laplace(0, scale) via inverse CDF.
    double laplace(double scale) {
        // u in (-1/2, 1/2]; next_double() is in [0,1) so 0.5 - u is in (-0.5, 0.5].
        double u = 0.5 - next_double();
        double sign = u < 0.0 ? -1.0 : 1.0;
        return -scale * sign * std::log(1.0 - 2.0 * std::fabs(u));
    }

    /// Fisher-Yates shuffle, fixed iteration order for reproducibility.
    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) {
            std::size_t j = next_index(i);
            std::swap(xs[i - 1], xs[j]);
        }
    }

private:
    std::uint64_t state_;
};

/// Derives an independent stream seed from (base, salt). Used to give each
/// cohort member, noise source, etc. its own stream from one run seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    SplitMix64 g(base ^ (0x9E3779B97F4A7C15ULL * (salt + 1)));
    return g.next_u64();
}

}  // namespace gml
