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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace phonosim {

/// Stable identifier of a phoneme. Identities survive removals of other
/// phonemes; secondary splits allocate fresh ids from a monotone counter
/// carried by the distribution.
using PhonemeId = std::int64_t;

/// Absolute tolerance on |sum(probs) - 1| accepted by PhonemeDistribution.
inline constexpr double kMassTolerance = 1e-12;

/// A normalized probability distribution over an inventory of anonymous
/// phonemes. Value type; the change operators below are pure functions that
/// return a new distribution.
///
/// Invariants (enforced at construction):
///   - at least two phonemes,
///   - every probability strictly positive and finite,
///   - probabilities sum to 1 within kMassTolerance,
///   - ids pairwise distinct, all below next_fresh_id().
class PhonemeDistribution {
public:
    PhonemeDistribution(std::vector<double> probs, std::vector<PhonemeId> ids,
                        PhonemeId next_fresh_id)
        : probs_(std::move(probs)), ids_(std::move(ids)), next_fresh_id_(next_fresh_id) {
        validate();
    }

    /// next_fresh_id defaults to max(ids)+1.
    PhonemeDistribution(std::vector<double> probs, std::vector<PhonemeId> ids)
        : probs_(std::move(probs)), ids_(std::move(ids)) {
        next_fresh_id_ = ids_.empty() ? 0 : *std::max_element(ids_.begin(), ids_.end()) + 1;
        validate();
    }

    /// Uniform distribution over `inventory_size` phonemes with ids 0..V-1.
    static PhonemeDistribution uniform(std::size_t inventory_size) {
        if (inventory_size < 2) {
            throw std::invalid_argument("uniform distribution needs at least 2 phonemes");
        }
        std::vector<double> probs(inventory_size, 1.0 / static_cast<double>(inventory_size));
        std::vector<PhonemeId> ids(inventory_size);
        for (std::size_t i = 0; i < inventory_size; ++i) ids[i] = static_cast<PhonemeId>(i);
        return PhonemeDistribution(std::move(probs), std::move(ids),
                                   static_cast<PhonemeId>(inventory_size));
    }

    /// Current inventory size V.
    std::size_t size() const noexcept { return probs_.size(); }

    double prob(std::size_t i) const { return probs_.at(i); }
    PhonemeId id(std::size_t i) const { return ids_.at(i); }

    const std::vector<double>& probs() const noexcept { return probs_; }
    const std::vector<PhonemeId>& ids() const noexcept { return ids_; }

    /// Id the next secondary split will assign. Strictly greater than every
    /// id ever used in this trajectory.
    PhonemeId next_fresh_id() const noexcept { return next_fresh_id_; }

    bool operator==(const PhonemeDistribution&) const = default;

private:
    void validate() const {
        if (probs_.size() != ids_.size()) {
            throw std::invalid_argument("probability and id sequences differ in length");
        }
        if (probs_.size() < 2) {
            throw std::invalid_argument("inventory must hold at least two phonemes");
        }
        double sum = 0.0;
        for (double p : probs_) {
            if (!(p > 0.0) || !std::isfinite(p)) {
                throw std::invalid_argument("probabilities must be strictly positive and finite");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kMassTolerance) {
            throw std::invalid_argument("probabilities must sum to 1 within 1e-12, got " +
                                        std::to_string(sum));
        }
        std::vector<PhonemeId> sorted = ids_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("phoneme ids must be pairwise distinct");
        }
        if (sorted.back() >= next_fresh_id_) {
            throw std::invalid_argument("next_fresh_id must exceed every existing id");
        }
    }

    std::vector<double> probs_;
    std::vector<PhonemeId> ids_;
    PhonemeId next_fresh_id_ = 0;
};

/// The three kinds of phonological change.
enum class ChangeType { PrimarySplit, SecondarySplit, Merger };

inline const char* to_string(ChangeType t) noexcept {
    switch (t) {
        case ChangeType::PrimarySplit: return "primary_split";
        case ChangeType::SecondarySplit: return "secondary_split";
        case ChangeType::Merger: return "merger";
    }
    return "?";
}

/// One sampled change event. `target` is present for primary splits and
/// mergers; `alpha` for primary and secondary splits.
struct ChangeEvent {
    ChangeType kind = ChangeType::PrimarySplit;
    std::size_t source = 0;
    std::optional<std::size_t> target;
    std::optional<double> alpha;
};

namespace detail {

inline void check_index(const PhonemeDistribution& dist, std::size_t i, const char* role) {
    if (i >= dist.size()) {
        throw std::out_of_range(std::string(role) + " index " + std::to_string(i) +
                                " out of range for inventory of size " +
                                std::to_string(dist.size()));
    }
}

inline void check_alpha(double alpha) {
    // (alpha > 0) is false for NaN, so this also rejects non-numbers.
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw std::invalid_argument("alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
}

inline void erase_at(std::vector<double>& probs, std::vector<PhonemeId>& ids, std::size_t i) {
    probs.erase(probs.begin() + static_cast<std::ptrdiff_t>(i));
    ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(i));
}

}  // namespace detail

/// Primary split: a proportion `alpha` of the source phoneme's mass moves to
/// an existing target phoneme. Inventory size is unchanged unless alpha == 1,
/// in which case the source phoneme disappears.
///
/// The transferred mass is computed once and both entries are updated with
/// it, so total mass is conserved without renormalization. For any alpha < 1
/// representable as a double the source retains strictly positive mass.
inline PhonemeDistribution apply_primary_split(const PhonemeDistribution& dist,
                                               std::size_t source, std::size_t target,
                                               double alpha) {
    detail::check_index(dist, source, "source");
    detail::check_index(dist, target, "target");
    if (source == target) {
        throw std::invalid_argument("primary split requires distinct source and target");
    }
    detail::check_alpha(alpha);

    std::vector<double> probs = dist.probs();
    std::vector<PhonemeId> ids = dist.ids();
    const double transferred = alpha * probs[source];
    probs[source] -= transferred;
    probs[target] += transferred;
    if (alpha == 1.0) {
        detail::erase_at(probs, ids, source);
    }
    return PhonemeDistribution(std::move(probs), std::move(ids), dist.next_fresh_id());
}

/// Secondary split: a proportion `alpha` of the source phoneme's mass becomes
/// a new phoneme carrying a fresh id. Inventory size grows by one unless
/// alpha == 1, in which case the source disappears and size is unchanged
/// (the identity is genuinely replaced: the new id differs from the old one).
inline PhonemeDistribution apply_secondary_split(const PhonemeDistribution& dist,
                                                 std::size_t source, double alpha) {
    detail::check_index(dist, source, "source");
    detail::check_alpha(alpha);

    std::vector<double> probs = dist.probs();
    std::vector<PhonemeId> ids = dist.ids();
    const double transferred = alpha * probs[source];
    probs[source] -= transferred;
    probs.push_back(transferred);
    ids.push_back(dist.next_fresh_id());
    if (alpha == 1.0) {
        detail::erase_at(probs, ids, source);
    }
    return PhonemeDistribution(std::move(probs), std::move(ids), dist.next_fresh_id() + 1);
}

/// Unconditioned merger: the source phoneme collapses completely into the
/// target. Inventory size decreases by exactly one. Requires V >= 3 so the
/// result respects the two-phoneme floor; callers enforcing the floor must
/// not request mergers at V == 2.
inline PhonemeDistribution apply_merger(const PhonemeDistribution& dist, std::size_t source,
                                        std::size_t target) {
    detail::check_index(dist, source, "source");
    detail::check_index(dist, target, "target");
    if (source == target) {
        throw std::invalid_argument("merger requires distinct source and target");
    }
    if (dist.size() < 3) {
        throw std::domain_error("merger requires an inventory of at least 3 phonemes");
    }

    std::vector<double> probs = dist.probs();
    std::vector<PhonemeId> ids = dist.ids();
    probs[target] += probs[source];
    detail::erase_at(probs, ids, source);
    return PhonemeDistribution(std::move(probs), std::move(ids), dist.next_fresh_id());
}

}  // namespace phonosim
