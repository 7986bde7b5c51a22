/*
 * Copyright 2026 The phonosim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

namespace phonosim {

/// SplitMix64 mixing function (Steele, Lea & Flood 2014). Bijective on
/// 64-bit integers; used to derive independent per-trajectory seeds.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for the random stream of one trajectory, derived from the master
/// seed and the trajectory index. Part of the reproducibility contract:
///
///   h = splitmix64(master)
///   seed(master, i) = splitmix64(h ^ (splitmix64(i) + 0x9E3779B97F4A7C15
///                                     + (h << 6) + (h >> 2)))
///
/// The combiner is deliberately asymmetric, so seed(a, b) != seed(b, a) in
/// general. Streams are independent of execution order and worker count.
inline constexpr std::uint64_t trajectory_seed(std::uint64_t master_seed,
                                               std::uint64_t trajectory_index) noexcept {
    const std::uint64_t h = splitmix64(master_seed);
    return splitmix64(h ^ (splitmix64(trajectory_index) + 0x9E3779B97F4A7C15ULL + (h << 6) +
                           (h >> 2)));
}

/// Deterministic uniform random stream.
///
/// Generator pin: std::mt19937_64 exactly as specified by ISO C++
/// [rand.eng.mers], seeded with a single 64-bit value (the standard fully
/// specifies this seeding). Doubles are produced from raw 64-bit outputs via
///
///   u = (x >> 11) * 2^-53            -> u in [0, 1)
///
/// rather than std::uniform_real_distribution, whose output is not pinned
/// across standard-library implementations. Replays are therefore stable
/// across platforms and compiler versions.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Stream for trajectory `index` of an ensemble run under `master_seed`.
    static RandomStream for_trajectory(std::uint64_t master_seed, std::uint64_t index) {
        return RandomStream(trajectory_seed(master_seed, index));
    }

    /// Raw engine output. Counts as one draw.
    std::uint64_t next_u64() {
        ++draws_;
        return engine_();
    }

    /// Uniform double in [0, 1). One draw.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double strictly inside (0, 1). One draw, except on an exact
    /// zero (probability 2^-53) where it redraws.
    double uniform_open01() {
        for (;;) {
            const double u = uniform01();
            if (u > 0.0) return u;
        }
    }

    /// Uniform index in [0, n). Inverse-CDF of the equal-weight categorical
    /// distribution: exactly one draw.
    std::size_t uniform_index(std::size_t n) {
        const auto idx = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return idx < n ? idx : n - 1;
    }

    /// Number of draws consumed so far (for stream-consumption contract tests).
    std::uint64_t draw_count() const noexcept { return draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

}  // namespace phonosim
