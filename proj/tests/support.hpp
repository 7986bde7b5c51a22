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

// Shared helpers for the test suite: independent numerical oracles and
// deterministic random-input generators. Everything here is intentionally
// written from first principles (no reuse of the library's own numerics) so
// the tests cross-check rather than echo the implementation.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "phonosim/core.hpp"
#include "phonosim/rng.hpp"

namespace testsupport {

/// Two-tailed Student-t tail probability by composite Simpson integration of
/// the density, using the substitution t = tan(theta) to map the infinite
/// tail onto a finite interval. Accuracy is far below 1e-9 at the panel
/// counts used here, making it an independent oracle for the library's
/// incomplete-beta implementation.
inline double t_two_tailed_p_by_integration(double t_stat, double df,
                                            std::size_t panels = 200000) {
    const double t0 = std::abs(t_stat);
    const double log_norm = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                            0.5 * std::log(df * M_PI);
    const auto density = [&](double t) {
        return std::exp(log_norm - (df + 1.0) / 2.0 * std::log1p(t * t / df));
    };

    const double a = std::atan(t0);
    const double b = M_PI / 2.0;
    const std::size_t n = panels % 2 == 0 ? panels : panels + 1;
    const double h = (b - a) / static_cast<double>(n);

    double sum = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double theta = a + h * static_cast<double>(i);
        double value = 0.0;
        if (i < n) {  // integrand -> 0 as theta -> pi/2 for df > 1
            const double t = std::tan(theta);
            value = density(t) * (1.0 + t * t);
        }
        const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += weight * value;
    }
    return 2.0 * sum * h / 3.0;
}

/// Standard normal draw by Box-Muller over the library's portable uniform
/// stream (std::normal_distribution is not pinned across standard libraries).
inline double standard_normal(phonosim::RandomStream& rng) {
    const double u1 = rng.uniform_open01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Random valid distribution with inventory size in [min_v, max_v],
/// exponential-ratio probabilities, and deliberately sparse ids so id
/// bookkeeping is exercised.
inline phonosim::PhonemeDistribution random_distribution(phonosim::RandomStream& rng,
                                                         std::size_t min_v = 2,
                                                         std::size_t max_v = 40) {
    const std::size_t v = min_v + rng.uniform_index(max_v - min_v + 1);
    std::vector<double> probs(v);
    double total = 0.0;
    for (auto& p : probs) {
        p = -std::log(rng.uniform_open01());
        total += p;
    }
    for (auto& p : probs) p /= total;

    std::vector<phonosim::PhonemeId> ids(v);
    for (std::size_t i = 0; i < v; ++i) {
        ids[i] = static_cast<phonosim::PhonemeId>(3 * i + 5);
    }
    return phonosim::PhonemeDistribution(std::move(probs), std::move(ids));
}

}  // namespace testsupport
