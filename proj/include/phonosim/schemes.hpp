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

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "phonosim/core.hpp"
#include "phonosim/rng.hpp"

namespace phonosim {

/// Probabilities of the three change types at one time step.
struct TypeProbabilities {
    double primary = 0.0;
    double secondary = 0.0;
    double merger = 0.0;

    double sum() const noexcept { return primary + secondary + merger; }
};

inline void validate(const TypeProbabilities& p) {
    if (!(p.primary >= 0.0) || !(p.secondary >= 0.0) || !(p.merger >= 0.0)) {
        throw std::invalid_argument("type probabilities must be non-negative");
    }
    if (std::abs(p.sum() - 1.0) > 1e-12) {
        throw std::invalid_argument("type probabilities must sum to 1 within 1e-12");
    }
}

/// Fixed change-type probabilities, independent of inventory size.
struct ConstantTypePolicy {
    TypeProbabilities probs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

/// Smooth bias of the inventory size toward a preferred value mu: split
/// probability decays and merger probability grows exponentially in
/// (V - mu) / mu, all three probabilities staying strictly positive.
struct AdaptiveTypePolicy {
    int target_inventory = 34;  // mu, >= 2
};

using TypePolicy = std::variant<ConstantTypePolicy, AdaptiveTypePolicy>;

/// How the phoneme losing mass is chosen.
enum class SourceSamplingPolicy {
    Uniform,                // every phoneme equally likely
    SurprisalProportional,  // probability proportional to -ln p (rarer = likelier)
};

/// How the mass proportion alpha is chosen.
enum class AlphaPolicy {
    UniformOpen,  // uniform on the open interval (0, 1)
};

/// Change-type probabilities for the current inventory size.
///
/// Constant policies return their stored probabilities regardless of V. The
/// adaptive policy evaluates, with mu the preferred inventory size,
///
///   P(primary)   = 1 / k
///   P(secondary) = e^{(mu - V) / mu} / k
///   P(merger)    = e^{(V - mu) / mu} / k
///   k            = 1 + e^{(mu - V) / mu} + e^{(V - mu) / mu}
inline TypeProbabilities type_probabilities(const TypePolicy& policy,
                                            std::size_t inventory_size) {
    if (inventory_size < 2) {
        throw std::invalid_argument("inventory size must be at least 2");
    }
    return std::visit(
        [&](const auto& p) -> TypeProbabilities {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantTypePolicy>) {
                return p.probs;
            } else {
                if (p.target_inventory < 2) {
                    throw std::invalid_argument("adaptive target inventory must be >= 2");
                }
                const double mu = static_cast<double>(p.target_inventory);
                const double v = static_cast<double>(inventory_size);
                assert(std::abs(v - mu) / mu < 700.0 && "exponent overflows double");
                const double grow = std::exp((mu - v) / mu);
                const double shrink = std::exp((v - mu) / mu);
                const double k = 1.0 + grow + shrink;
                return TypeProbabilities{1.0 / k, grow / k, shrink / k};
            }
        },
        policy);
}

/// Sample a change type by inverse CDF. Exactly one draw.
inline ChangeType sample_change_type(const TypeProbabilities& probs, RandomStream& rng) {
    const double u = rng.uniform01();
    if (u < probs.primary) return ChangeType::PrimarySplit;
    if (u < probs.primary + probs.secondary) return ChangeType::SecondarySplit;
    return ChangeType::Merger;
}

/// Sample the phoneme losing mass. Exactly one draw.
///
/// Under SurprisalProportional, index i is chosen with probability
/// s_i / sum_j s_j where s_i = -ln p(i). All weights are non-negative
/// because every live phoneme has p <= 1; with V >= 2 at least one weight
/// is strictly positive.
inline std::size_t sample_source(const PhonemeDistribution& dist, SourceSamplingPolicy policy,
                                 RandomStream& rng) {
    const std::size_t v = dist.size();
    if (policy == SourceSamplingPolicy::Uniform) {
        return rng.uniform_index(v);
    }

    double total = 0.0;
    for (double p : dist.probs()) {
        assert(p > 0.0 && p <= 1.0);
        total += -std::log(p);
    }
    assert(total > 0.0 && "surprisal weights degenerate");

    const double u = rng.uniform01() * total;
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < v; ++i) {
        cumulative += -std::log(dist.prob(i));
        if (u < cumulative) return i;
    }
    return v - 1;
}

/// Sample the phoneme gaining mass, uniformly among all phonemes except the
/// source. Exactly one draw.
inline std::size_t sample_target(const PhonemeDistribution& dist, std::size_t source,
                                 RandomStream& rng) {
    const std::size_t v = dist.size();
    if (source >= v) throw std::out_of_range("source index out of range");
    const std::size_t idx = rng.uniform_index(v - 1);
    return idx >= source ? idx + 1 : idx;
}

/// Sample the mass proportion alpha, strictly inside (0, 1).
inline double sample_alpha(AlphaPolicy policy, RandomStream& rng) {
    switch (policy) {
        case AlphaPolicy::UniformOpen: return rng.uniform_open01();
    }
    throw std::invalid_argument("unknown alpha policy");
}

}  // namespace phonosim
