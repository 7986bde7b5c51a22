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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "phonosim/core.hpp"
#include "phonosim/rng.hpp"
#include "phonosim/schemes.hpp"

namespace phonosim {

/// Full parameterization of one simulation regime.
struct SimulationConfig {
    int n_languages = 400;
    int n_steps = 1000;
    int initial_inventory_size = 34;
    TypePolicy type_policy = ConstantTypePolicy{};
    SourceSamplingPolicy source_policy = SourceSamplingPolicy::Uniform;
    AlphaPolicy alpha_policy = AlphaPolicy::UniformOpen;
    int min_inventory = 2;
    std::uint64_t master_seed = 1;
    /// Keep every intermediate distribution on the trajectory record
    /// (debugging aid; the analyses only need the final one).
    bool record_full_history = false;

    void validate() const {
        if (n_languages < 1) throw std::invalid_argument("n_languages must be positive");
        if (n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");
        if (min_inventory < 2) throw std::invalid_argument("min_inventory must be at least 2");
        if (initial_inventory_size < min_inventory) {
            throw std::invalid_argument("initial_inventory_size must be >= min_inventory");
        }
        if (const auto* c = std::get_if<ConstantTypePolicy>(&type_policy)) {
            phonosim::validate(c->probs);
        } else if (const auto* a = std::get_if<AdaptiveTypePolicy>(&type_policy)) {
            if (a->target_inventory < 2) {
                throw std::invalid_argument("adaptive target inventory (mu) must be >= 2");
            }
        }
    }
};

/// Time series of one simulated language.
struct TrajectoryRecord {
    int language_index = 0;
    /// Inventory size after each step; length n_steps + 1, entry 0 is the
    /// initial state. Adjacent entries differ by at most 1 and never fall
    /// below min_inventory.
    std::vector<int> pis_series;
    PhonemeDistribution final_distribution;
    /// Populated only when record_full_history is set (one entry per step,
    /// excluding the initial state).
    std::vector<PhonemeDistribution> history;

    bool operator==(const TrajectoryRecord&) const = default;
};

struct StepResult {
    PhonemeDistribution distribution;
    ChangeEvent event;
};

/// Apply one change event to `dist`.
///
/// Draw order (the stream-consumption contract): one draw for the change
/// type, plus one more if a merger is drawn at the inventory floor (the type
/// is then resampled among the two splits with renormalized probabilities);
/// one draw for the source; one for the target when the type needs one; one
/// for alpha when the type needs one.
inline StepResult step(const PhonemeDistribution& dist, const SimulationConfig& config,
                       RandomStream& rng) {
    const std::size_t v = dist.size();
    const TypeProbabilities tp = type_probabilities(config.type_policy, v);

    ChangeType kind = sample_change_type(tp, rng);
    if (kind == ChangeType::Merger && v <= static_cast<std::size_t>(config.min_inventory)) {
        // Reflecting constraint: every interval holds exactly one change, so
        // the type is resampled among the splits instead of skipping time.
        const double split_mass = tp.primary + tp.secondary;
        if (!(split_mass > 0.0)) {
            throw std::runtime_error("type policy admits only mergers at the inventory floor");
        }
        kind = rng.uniform01() < tp.primary / split_mass ? ChangeType::PrimarySplit
                                                         : ChangeType::SecondarySplit;
    }

    ChangeEvent event;
    event.kind = kind;
    event.source = sample_source(dist, config.source_policy, rng);
    switch (kind) {
        case ChangeType::PrimarySplit: {
            event.target = sample_target(dist, event.source, rng);
            event.alpha = sample_alpha(config.alpha_policy, rng);
            return {apply_primary_split(dist, event.source, *event.target, *event.alpha), event};
        }
        case ChangeType::SecondarySplit: {
            event.alpha = sample_alpha(config.alpha_policy, rng);
            return {apply_secondary_split(dist, event.source, *event.alpha), event};
        }
        case ChangeType::Merger: {
            event.target = sample_target(dist, event.source, rng);
            return {apply_merger(dist, event.source, *event.target), event};
        }
    }
    throw std::logic_error("unreachable change type");
}

/// Run one language for config.n_steps steps. A pure function of
/// (config, language_index): the trajectory stream is seeded with
/// trajectory_seed(config.master_seed, language_index).
inline TrajectoryRecord run_trajectory(const SimulationConfig& config, int language_index) {
    config.validate();
    RandomStream rng = RandomStream::for_trajectory(config.master_seed,
                                                    static_cast<std::uint64_t>(language_index));

    PhonemeDistribution state =
        PhonemeDistribution::uniform(static_cast<std::size_t>(config.initial_inventory_size));

    TrajectoryRecord record{language_index, {}, state, {}};
    record.pis_series.reserve(static_cast<std::size_t>(config.n_steps) + 1);
    record.pis_series.push_back(static_cast<int>(state.size()));
    if (config.record_full_history) {
        record.history.reserve(static_cast<std::size_t>(config.n_steps));
    }

    for (int t = 0; t < config.n_steps; ++t) {
        StepResult result = step(state, config, rng);
        state = std::move(result.distribution);
        record.pis_series.push_back(static_cast<int>(state.size()));
        if (config.record_full_history) {
            record.history.push_back(state);
        }
    }
    record.final_distribution = std::move(state);
    return record;
}

/// Run the whole ensemble. Each trajectory derives its stream from
/// (master_seed, language_index), so the output is identical for any worker
/// count and execution order.
inline std::vector<TrajectoryRecord> run_ensemble(const SimulationConfig& config,
                                                  unsigned n_workers = 1) {
    config.validate();
    const int n = config.n_languages;
    std::vector<std::optional<TrajectoryRecord>> slots(static_cast<std::size_t>(n));

    const unsigned workers = std::max(1u, std::min<unsigned>(n_workers, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) {
            slots[static_cast<std::size_t>(i)] = run_trajectory(config, i);
        }
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                slots[static_cast<std::size_t>(i)] = run_trajectory(config, i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<TrajectoryRecord> records;
    records.reserve(static_cast<std::size_t>(n));
    for (auto& slot : slots) records.push_back(std::move(*slot));
    return records;
}

/// Per-step summary of inventory sizes across an ensemble.
struct PisEnvelopes {
    std::vector<double> min;
    std::vector<double> p2_5;
    std::vector<double> mean;
    std::vector<double> p97_5;
    std::vector<double> max;

    std::size_t n_points() const noexcept { return mean.size(); }
};

namespace detail {

/// Percentile by linear interpolation between order statistics
/// (h = (n-1) q, interpolate sorted[floor(h)]..sorted[ceil(h)]).
inline double percentile_sorted(const std::vector<double>& sorted, double q) {
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

/// Min / 2.5th percentile / mean / 97.5th percentile / max of the inventory
/// size at each step, across per-language series of equal length.
inline PisEnvelopes pis_envelopes(const std::vector<std::vector<int>>& series) {
    if (series.empty()) throw std::invalid_argument("no trajectories to summarize");
    const std::size_t len = series.front().size();
    for (const auto& s : series) {
        if (s.size() != len) {
            throw std::invalid_argument("trajectories have ragged lengths");
        }
    }

    PisEnvelopes env;
    env.min.reserve(len);
    env.p2_5.reserve(len);
    env.mean.reserve(len);
    env.p97_5.reserve(len);
    env.max.reserve(len);

    std::vector<double> column(series.size());
    for (std::size_t t = 0; t < len; ++t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < series.size(); ++i) {
            column[i] = static_cast<double>(series[i][t]);
            sum += column[i];
        }
        std::sort(column.begin(), column.end());
        env.min.push_back(column.front());
        env.p2_5.push_back(detail::percentile_sorted(column, 0.025));
        env.mean.push_back(sum / static_cast<double>(column.size()));
        env.p97_5.push_back(detail::percentile_sorted(column, 0.975));
        env.max.push_back(column.back());
    }
    return env;
}

inline PisEnvelopes pis_envelopes(const std::vector<TrajectoryRecord>& records) {
    std::vector<std::vector<int>> series;
    series.reserve(records.size());
    for (const auto& r : records) series.push_back(r.pis_series);
    return pis_envelopes(series);
}

}  // namespace phonosim
