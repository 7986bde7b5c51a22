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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phonosim/core.hpp"
#include "phonosim/engine.hpp"
#include "phonosim/numerics.hpp"

namespace phonosim {

/// Raised when a correlation or regression is requested on data whose
/// variance is zero on one of the axes.
struct DegenerateVarianceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

/// True when every value sits within floating-point noise of the mean, i.e.
/// the sample carries no usable variance. Mathematically constant quantities
/// (such as the relative entropy of uniform distributions over differing
/// inventory sizes) come out a few ulps apart rather than bit-identical, so
/// an exact zero-variance test would mistake rounding noise for signal. The
/// slack covers rounding accumulated over computations with ~1000 terms; any
/// genuine effect in this domain is many orders of magnitude larger.
inline bool numerically_constant(std::span<const double> values, double mean) noexcept {
    double scale = std::abs(mean);
    for (const double v : values) scale = std::max(scale, std::abs(v));
    const double slack = 1024.0 * std::numeric_limits<double>::epsilon() * scale;
    for (const double v : values) {
        if (std::abs(v - mean) > slack) return false;
    }
    return true;
}

}  // namespace detail

/// Shannon entropy in bits, -sum p_i log2 p_i. Positivity of the
/// distribution guarantees every term is finite.
inline double entropy_bits(const PhonemeDistribution& dist) {
    double h = 0.0;
    for (double p : dist.probs()) h -= p * std::log2(p);
    return h;
}

/// Entropy normalized by its maximum log2(V) for the observed inventory
/// size; 1 exactly for uniform distributions, near 0 for extremely skewed
/// ones. Base-invariant.
inline double relative_entropy(const PhonemeDistribution& dist) {
    if (dist.size() < 2) throw std::domain_error("relative entropy needs V >= 2");
    return entropy_bits(dist) / std::log2(static_cast<double>(dist.size()));
}

struct EntropySummary {
    int pis = 0;
    double entropy_bits = 0.0;
    double relative_entropy = 0.0;
};

inline EntropySummary summarize_entropy(const PhonemeDistribution& dist) {
    const double h = entropy_bits(dist);
    return {static_cast<int>(dist.size()), h,
            h / std::log2(static_cast<double>(dist.size()))};
}

struct RankFrequencyEntry {
    int rank = 0;  // 1-based
    double probability = 0.0;
};

struct RankFrequencyTable {
    std::string language;
    std::vector<RankFrequencyEntry> entries;  // non-increasing in probability
};

/// Probabilities sorted descending with 1-based ranks. Ties are broken by
/// ascending phoneme id, so the output is deterministic.
inline RankFrequencyTable rank_frequency(const PhonemeDistribution& dist, std::string label) {
    std::vector<std::size_t> order(dist.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dist.prob(a) != dist.prob(b)) return dist.prob(a) > dist.prob(b);
        return dist.id(a) < dist.id(b);
    });

    RankFrequencyTable table{std::move(label), {}};
    table.entries.reserve(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        table.entries.push_back({static_cast<int>(r + 1), dist.prob(order[r])});
    }
    return table;
}

struct CorrelationResult {
    double r = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

/// Pearson correlation with a two-tailed p-value from the t statistic
/// t = r sqrt((n-2) / (1-r^2)) on n-2 degrees of freedom.
inline CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
    const std::size_t n = xs.size();
    if (n < 3) throw std::invalid_argument("pearson needs at least 3 observations");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    if (detail::numerically_constant(xs, mx) || detail::numerically_constant(ys, my)) {
        throw DegenerateVarianceError("correlation undefined: zero variance in the data");
    }

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw DegenerateVarianceError("correlation undefined: zero variance in the data");
    }

    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    const double df = static_cast<double>(n - 2);
    double p = 0.0;
    if (r * r < 1.0) {
        const double t = r * std::sqrt(df / (1.0 - r * r));
        p = student_t_two_tailed_p(t, df);
    }
    return {r, p, n};
}

struct RegressionFit {
    double intercept = 0.0;      // a in y = a + b ln x
    double slope = 0.0;          // b
    double intercept_se = 0.0;
    double slope_se = 0.0;
    std::vector<double> grid_x;  // raw x values (not logged)
    std::vector<double> fitted;
    std::vector<double> lower95;
    std::vector<double> upper95;
};

/// Ordinary least squares of y on ln x, with the 95% confidence band for the
/// conditional mean evaluated on a linear grid spanning the observed x range.
inline RegressionFit loglinear_fit(std::span<const int> xs_raw, std::span<const double> ys,
                                   std::size_t grid_points = 101) {
    if (xs_raw.size() != ys.size()) throw std::invalid_argument("loglinear_fit: length mismatch");
    const std::size_t n = xs_raw.size();
    if (n < 3) throw std::invalid_argument("loglinear_fit needs at least 3 observations");
    if (grid_points < 2) throw std::invalid_argument("grid needs at least 2 points");

    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (xs_raw[i] < 2) throw std::invalid_argument("loglinear_fit: predictor values must be >= 2");
        xs[i] = std::log(static_cast<double>(xs_raw[i]));
    }

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    if (detail::numerically_constant(xs, mx)) {
        throw DegenerateVarianceError("regression undefined: predictor has zero variance");
    }

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw DegenerateVarianceError("regression undefined: predictor has zero variance");
    }

    RegressionFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
        sse += resid * resid;
    }
    const double df = static_cast<double>(n - 2);
    const double sigma2 = sse / df;
    fit.slope_se = std::sqrt(sigma2 / sxx);
    fit.intercept_se = std::sqrt(sigma2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));

    const double tq = student_t_quantile(0.975, df);
    const auto [min_it, max_it] = std::minmax_element(xs_raw.begin(), xs_raw.end());
    const double x_lo = static_cast<double>(*min_it);
    const double x_hi = static_cast<double>(*max_it);

    fit.grid_x.reserve(grid_points);
    fit.fitted.reserve(grid_points);
    fit.lower95.reserve(grid_points);
    fit.upper95.reserve(grid_points);
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double x = x_lo + (x_hi - x_lo) * static_cast<double>(k) /
                                    static_cast<double>(grid_points - 1);
        const double lx = std::log(x);
        const double y = fit.intercept + fit.slope * lx;
        const double half = tq * std::sqrt(sigma2 * (1.0 / static_cast<double>(n) +
                                                     (lx - mx) * (lx - mx) / sxx));
        fit.grid_x.push_back(x);
        fit.fitted.push_back(y);
        fit.lower95.push_back(y - half);
        fit.upper95.push_back(y + half);
    }
    return fit;
}

/// One (inventory size, relative entropy) pair per language, with the
/// correlation between ln(PIS) and relative entropy and the log-linear
/// regression of relative entropy on PIS.
struct PisEntropyAnalysis {
    std::vector<std::pair<int, double>> pairs;
    CorrelationResult correlation;
    RegressionFit regression;
};

inline PisEntropyAnalysis analyze_final_distributions(
    const std::vector<PhonemeDistribution>& finals) {
    if (finals.empty()) throw std::invalid_argument("no distributions to analyze");

    PisEntropyAnalysis out;
    std::vector<int> pis;
    std::vector<double> log_pis, rel_ent;
    pis.reserve(finals.size());
    log_pis.reserve(finals.size());
    rel_ent.reserve(finals.size());
    for (const auto& dist : finals) {
        const int v = static_cast<int>(dist.size());
        const double h = relative_entropy(dist);
        out.pairs.emplace_back(v, h);
        pis.push_back(v);
        log_pis.push_back(std::log(static_cast<double>(v)));
        rel_ent.push_back(h);
    }
    out.correlation = pearson(log_pis, rel_ent);
    out.regression = loglinear_fit(pis, rel_ent);
    return out;
}

inline PisEntropyAnalysis pis_vs_relative_entropy(const std::vector<TrajectoryRecord>& records) {
    std::vector<PhonemeDistribution> finals;
    finals.reserve(records.size());
    for (const auto& r : records) finals.push_back(r.final_distribution);
    return analyze_final_distributions(finals);
}

}  // namespace phonosim
