//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_RNG_HPP
#define RAINSENSE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rainsense {

// Deterministic splitmix64 generator. Every randomized stage derives its own
// substream from a master seed plus a fixed tag, so serial and parallel runs
// produce identical bytes regardless of scheduling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // Standard normal via Box-Muller; consumes two uniforms per call and
    // keeps no hidden state so copies of the generator stay in sync.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::uint64_t state_;
};

// Derives an independent substream seed from (seed, tag). Used to hand each
// station / window / fold its own generator.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed ^ (0xD1B54A32D192ED03ULL + tag * 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b) {
    return derive_seed(derive_seed(seed, tag_a), tag_b);
}

// Fixed substream tags, one per randomized stage.
namespace seed_tag {
constexpr std::uint64_t station_layout = 1;
constexpr std::uint64_t user_scatter = 2;
constexpr std::uint64_t signal_noise = 3;
constexpr std::uint64_t outdoor_flags = 4;
constexpr std::uint64_t station_bias = 5;
constexpr std::uint64_t kmeans_init = 6;
constexpr std::uint64_t split_shuffle = 7;
constexpr std::uint64_t weight_init = 8;
constexpr std::uint64_t epoch_shuffle = 9;
constexpr std::uint64_t shadow_fading = 10;
constexpr std::uint64_t rain_draw = 11;
constexpr std::uint64_t micro_layout = 12;
constexpr std::uint64_t user_layout = 13;
constexpr std::uint64_t repetition = 14;
constexpr std::uint64_t radar_field = 15;
} // namespace seed_tag

} // namespace rainsense

#endif // RAINSENSE_RNG_HPP
