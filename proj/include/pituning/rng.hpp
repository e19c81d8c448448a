#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pituning/errors.hpp"

namespace pituning {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Derive an independent engine for a sub-stream (e.g. one per user) so that
/// per-stream output does not depend on how many draws other streams made.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

inline double draw_uniform(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double draw_normal(Rng& rng, double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(rng);
}

/// Uniform integer in [0, n).
inline int draw_index(Rng& rng, int n) {
    if (n <= 0) throw ArgumentError("draw_index: n must be positive");
    return static_cast<int>(std::uniform_int_distribution<long>(0, n - 1)(rng));
}

/// Sample an index from an unnormalized non-negative weight vector.
inline int draw_categorical(Rng& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ArgumentError("draw_categorical: negative weight");
        total += w;
    }
    if (total <= 0.0) throw ArgumentError("draw_categorical: weights sum to zero");
    double u = draw_uniform(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size() - 1);
}

}  // namespace pituning
