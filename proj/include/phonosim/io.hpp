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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phonosim/engine.hpp"
#include "phonosim/stats.hpp"
#include "phonosim/version.hpp"

namespace phonosim {

/// Bad configuration (unknown key, invalid value, missing file). Maps to
/// exit code 1 in the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or missing input data. Maps to exit code 2 in the CLI.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed decimal formatting used in every CSV: 12 significant digits,
/// C locale, shortest form.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Mass tolerance when reading serialized distributions back. Writing at 12
/// significant digits perturbs each probability by at most ~5e-12 relative,
/// so sums can drift past the strict in-memory bound; accepted inputs are
/// rescaled to restore it exactly.
inline constexpr double kSerializedMassTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Simulation presets and the key-value config format
// ---------------------------------------------------------------------------

/// Built-in regime configurations. All three run 400 languages for 1,000
/// steps from a uniform 34-phoneme start with master seed 1:
///   sim1  constant equal type probabilities, uniform source sampling
///   sim2  constant equal type probabilities, surprisal-proportional sources
///   sim3  adaptive type probabilities (mu = 34), surprisal-proportional sources
inline SimulationConfig preset_config(std::string_view name) {
    SimulationConfig config;
    config.n_languages = 400;
    config.n_steps = 1000;
    config.initial_inventory_size = 34;
    config.min_inventory = 2;
    config.master_seed = 1;
    config.alpha_policy = AlphaPolicy::UniformOpen;
    if (name == "sim1") {
        config.type_policy = ConstantTypePolicy{};
        config.source_policy = SourceSamplingPolicy::Uniform;
    } else if (name == "sim2") {
        config.type_policy = ConstantTypePolicy{};
        config.source_policy = SourceSamplingPolicy::SurprisalProportional;
    } else if (name == "sim3") {
        config.type_policy = AdaptiveTypePolicy{34};
        config.source_policy = SourceSamplingPolicy::SurprisalProportional;
    } else {
        throw ConfigError("unknown preset '" + std::string(name) +
                          "' (expected sim1, sim2 or sim3)");
    }
    return config;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t");
    return std::string(s.substr(begin, end - begin + 1));
}

template <typename T>
T parse_integer(const std::string& value, const std::string& key, std::size_t line) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("invalid value '" + value + "' for key '" + key + "' (line " +
                          std::to_string(line) + ")");
    }
    return out;
}

inline double parse_double(const std::string& value, const std::string& key, std::size_t line) {
    double out = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("invalid value '" + value + "' for key '" + key + "' (line " +
                          std::to_string(line) + ")");
    }
    return out;
}

}  // namespace detail

/// Parse the flat key-value simulation config format:
///
///   # comment
///   preset = sim3           (optional; must come before any other key)
///   n_languages = 400
///   n_steps = 1000
///   initial_inventory_size = 34
///   initial_distribution = uniform
///   type_policy = constant | adaptive
///   type_probabilities = p,s,m      (constant policy only)
///   mu = 34                         (adaptive policy only)
///   source_policy = uniform | surprisal
///   alpha_policy = uniform-open
///   min_inventory = 2
///   master_seed = 1
///
/// Later keys override the preset. Unknown keys are rejected by name.
inline SimulationConfig parse_simulation_config(std::istream& in) {
    SimulationConfig config = preset_config("sim1");
    std::optional<std::string> policy_kind;
    std::optional<TypeProbabilities> explicit_probs;
    std::optional<int> explicit_mu;
    bool preset_named = false;
    bool any_key_seen = false;

    std::string raw;
    std::size_t line_number = 0;
    while (std::getline(in, raw)) {
        ++line_number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const auto comment = raw.find('#');
        if (comment != std::string::npos) raw.erase(comment);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value' (line " + std::to_string(line_number) + ")");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("empty key or value (line " + std::to_string(line_number) + ")");
        }

        if (key == "preset") {
            if (any_key_seen) {
                throw ConfigError("'preset' must be the first key (line " +
                                  std::to_string(line_number) + ")");
            }
            config = preset_config(value);
            preset_named = true;
        } else if (key == "n_languages") {
            config.n_languages = detail::parse_integer<int>(value, key, line_number);
        } else if (key == "n_steps") {
            config.n_steps = detail::parse_integer<int>(value, key, line_number);
        } else if (key == "initial_inventory_size") {
            config.initial_inventory_size = detail::parse_integer<int>(value, key, line_number);
        } else if (key == "initial_distribution") {
            if (value != "uniform") {
                throw ConfigError("invalid value '" + value + "' for key 'initial_distribution'"
                                  " (only 'uniform' is supported, line " +
                                  std::to_string(line_number) + ")");
            }
        } else if (key == "type_policy") {
            if (value != "constant" && value != "adaptive") {
                throw ConfigError("invalid value '" + value + "' for key 'type_policy' (line " +
                                  std::to_string(line_number) + ")");
            }
            policy_kind = value;
        } else if (key == "type_probabilities") {
            std::istringstream parts(value);
            std::string part;
            std::vector<double> probs;
            while (std::getline(parts, part, ',')) {
                probs.push_back(detail::parse_double(detail::trim(part), key, line_number));
            }
            if (probs.size() != 3) {
                throw ConfigError("key 'type_probabilities' needs 3 comma-separated values"
                                  " (line " + std::to_string(line_number) + ")");
            }
            explicit_probs = TypeProbabilities{probs[0], probs[1], probs[2]};
        } else if (key == "mu") {
            explicit_mu = detail::parse_integer<int>(value, key, line_number);
        } else if (key == "source_policy") {
            if (value == "uniform") {
                config.source_policy = SourceSamplingPolicy::Uniform;
            } else if (value == "surprisal") {
                config.source_policy = SourceSamplingPolicy::SurprisalProportional;
            } else {
                throw ConfigError("invalid value '" + value + "' for key 'source_policy' (line " +
                                  std::to_string(line_number) + ")");
            }
        } else if (key == "alpha_policy") {
            if (value != "uniform-open") {
                throw ConfigError("invalid value '" + value + "' for key 'alpha_policy' (line " +
                                  std::to_string(line_number) + ")");
            }
            config.alpha_policy = AlphaPolicy::UniformOpen;
        } else if (key == "min_inventory") {
            config.min_inventory = detail::parse_integer<int>(value, key, line_number);
        } else if (key == "master_seed") {
            config.master_seed = detail::parse_integer<std::uint64_t>(value, key, line_number);
        } else {
            throw ConfigError("unknown config key '" + key + "' (line " +
                              std::to_string(line_number) + ")");
        }
        any_key_seen = true;
    }

    // A bare policy knob implies its kind only when neither 'type_policy'
    // nor a preset pinned one; a named preset's kind must match the knob.
    if (!policy_kind && !preset_named) {
        if (explicit_probs) policy_kind = "constant";
        if (explicit_mu) policy_kind = "adaptive";
    }
    if (policy_kind == "constant") {
        if (explicit_mu) {
            throw ConfigError("key 'mu' requires type_policy = adaptive");
        }
        config.type_policy =
            ConstantTypePolicy{explicit_probs.value_or(TypeProbabilities{1.0 / 3.0, 1.0 / 3.0,
                                                                         1.0 / 3.0})};
    } else if (policy_kind == "adaptive") {
        if (explicit_probs) {
            throw ConfigError("key 'type_probabilities' requires type_policy = constant");
        }
        config.type_policy = AdaptiveTypePolicy{explicit_mu.value_or(34)};
    } else if (explicit_probs || explicit_mu) {
        // Knobs given under a named preset: refine its kind or reject.
        if (explicit_probs && std::holds_alternative<ConstantTypePolicy>(config.type_policy)) {
            config.type_policy = ConstantTypePolicy{*explicit_probs};
        } else if (explicit_mu &&
                   std::holds_alternative<AdaptiveTypePolicy>(config.type_policy)) {
            config.type_policy = AdaptiveTypePolicy{*explicit_mu};
        } else {
            throw ConfigError(explicit_probs
                                  ? "key 'type_probabilities' requires type_policy = constant"
                                  : "key 'mu' requires type_policy = adaptive");
        }
    }

    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return config;
}

inline SimulationConfig load_simulation_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse_simulation_config(in);
}

inline nlohmann::json config_to_json(const SimulationConfig& config) {
    nlohmann::json policy;
    if (const auto* c = std::get_if<ConstantTypePolicy>(&config.type_policy)) {
        policy = {{"kind", "constant"},
                  {"probabilities",
                   {c->probs.primary, c->probs.secondary, c->probs.merger}}};
    } else {
        policy = {{"kind", "adaptive"},
                  {"mu", std::get<AdaptiveTypePolicy>(config.type_policy).target_inventory}};
    }
    return nlohmann::json{
        {"n_languages", config.n_languages},
        {"n_steps", config.n_steps},
        {"initial_inventory_size", config.initial_inventory_size},
        {"initial_distribution", "uniform"},
        {"type_policy", policy},
        {"source_policy", config.source_policy == SourceSamplingPolicy::Uniform ? "uniform"
                                                                                : "surprisal"},
        {"alpha_policy", "uniform-open"},
        {"min_inventory", config.min_inventory},
        {"master_seed", config.master_seed},
    };
}

// ---------------------------------------------------------------------------
// File helpers and digests
// ---------------------------------------------------------------------------

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("failed writing '" + path.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

/// FNV-1a 64-bit content digest, reported as 16 hex digits.
inline std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

inline std::string utc_timestamp_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------------------
// CSV/JSON builders (all byte-deterministic for fixed inputs)
// ---------------------------------------------------------------------------

inline std::string trajectories_csv(const std::vector<TrajectoryRecord>& records) {
    std::string out = "language_index,step,pis\n";
    for (const auto& r : records) {
        for (std::size_t t = 0; t < r.pis_series.size(); ++t) {
            out += std::to_string(r.language_index);
            out += ',';
            out += std::to_string(t);
            out += ',';
            out += std::to_string(r.pis_series[t]);
            out += '\n';
        }
    }
    return out;
}

inline std::string final_distributions_csv(
    const std::vector<std::pair<std::string, PhonemeDistribution>>& languages) {
    std::string out = "language_index,phoneme_id,probability\n";
    for (const auto& [label, dist] : languages) {
        for (std::size_t i = 0; i < dist.size(); ++i) {
            out += label;
            out += ',';
            out += std::to_string(dist.id(i));
            out += ',';
            out += format_number(dist.prob(i));
            out += '\n';
        }
    }
    return out;
}

inline std::string final_distributions_csv(const std::vector<TrajectoryRecord>& records) {
    std::vector<std::pair<std::string, PhonemeDistribution>> languages;
    languages.reserve(records.size());
    for (const auto& r : records) {
        languages.emplace_back(std::to_string(r.language_index), r.final_distribution);
    }
    return final_distributions_csv(languages);
}

inline std::string rank_frequency_csv(const std::vector<RankFrequencyTable>& tables) {
    std::string out = "language,rank,probability\n";
    for (const auto& table : tables) {
        for (const auto& e : table.entries) {
            out += table.language;
            out += ',';
            out += std::to_string(e.rank);
            out += ',';
            out += format_number(e.probability);
            out += '\n';
        }
    }
    return out;
}

inline std::string pis_entropy_csv(
    const std::vector<std::pair<std::string, EntropySummary>>& rows) {
    std::string out = "language,pis,relative_entropy\n";
    for (const auto& [label, summary] : rows) {
        out += label;
        out += ',';
        out += std::to_string(summary.pis);
        out += ',';
        out += format_number(summary.relative_entropy);
        out += '\n';
    }
    return out;
}

inline std::string regression_csv(const RegressionFit& fit) {
    std::string out = "x,fit,lower95,upper95\n";
    for (std::size_t i = 0; i < fit.grid_x.size(); ++i) {
        out += format_number(fit.grid_x[i]);
        out += ',';
        out += format_number(fit.fitted[i]);
        out += ',';
        out += format_number(fit.lower95[i]);
        out += ',';
        out += format_number(fit.upper95[i]);
        out += '\n';
    }
    return out;
}

inline std::string envelopes_csv(const PisEnvelopes& env) {
    std::string out = "step,min,p2_5,mean,p97_5,max\n";
    for (std::size_t t = 0; t < env.n_points(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += format_number(env.min[t]);
        out += ',';
        out += format_number(env.p2_5[t]);
        out += ',';
        out += format_number(env.mean[t]);
        out += ',';
        out += format_number(env.p97_5[t]);
        out += ',';
        out += format_number(env.max[t]);
        out += '\n';
    }
    return out;
}

/// correlation.json: {r, p_value, n} on success; explicit nulls plus a
/// reason when the correlation is undefined.
inline std::string correlation_json(const std::optional<CorrelationResult>& result,
                                    std::size_t n, std::string_view reason) {
    nlohmann::json j;
    if (result) {
        j = {{"r", result->r}, {"p_value", result->p_value}, {"n", result->n}};
    } else {
        j = {{"r", nullptr}, {"p_value", nullptr}, {"n", n}, {"reason", std::string(reason)}};
    }
    return j.dump(2) + "\n";
}

inline std::string manifest_json(const SimulationConfig& config,
                                 const std::vector<std::pair<std::string, std::string>>& digests,
                                 const std::string& timestamp) {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& [file, digest] : digests) {
        outputs.push_back({{"file", file}, {"fnv1a64", digest}});
    }
    const nlohmann::json j = {
        {"tool", std::string(kToolName)},
        {"version", std::string(kToolVersion)},
        {"created_utc", timestamp},
        {"config", config_to_json(config)},
        {"outputs", outputs},
    };
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV readers
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline double parse_csv_double(const std::string& text, std::size_t line_number) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DataError("line " + std::to_string(line_number) + ": invalid number '" + text + "'");
    }
    return out;
}

inline long long parse_csv_int(const std::string& text, std::size_t line_number) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DataError("line " + std::to_string(line_number) + ": invalid integer '" + text +
                        "'");
    }
    return out;
}

}  // namespace detail

/// Read a final_distributions.csv. Returns (language label, distribution)
/// in first-appearance order.
inline std::vector<std::pair<std::string, PhonemeDistribution>> read_final_distributions_csv(
    std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty final distributions file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "language_index,phoneme_id,probability") {
        throw DataError("expected header 'language_index,phoneme_id,probability'");
    }

    std::vector<std::string> order;
    std::vector<std::vector<double>> probs;
    std::vector<std::vector<PhonemeId>> ids;
    std::map<std::string, std::size_t> index;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_row(line);
        if (fields.size() != 3) {
            throw DataError("line " + std::to_string(line_number) + ": expected 3 fields");
        }
        const auto [it, fresh] = index.try_emplace(fields[0], order.size());
        if (fresh) {
            order.push_back(fields[0]);
            probs.emplace_back();
            ids.emplace_back();
        }
        const std::size_t slot = it->second;
        ids[slot].push_back(detail::parse_csv_int(fields[1], line_number));
        probs[slot].push_back(detail::parse_csv_double(fields[2], line_number));
    }

    std::vector<std::pair<std::string, PhonemeDistribution>> out;
    out.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        double sum = 0.0;
        for (const double p : probs[i]) sum += p;
        if (!(std::abs(sum - 1.0) <= kSerializedMassTolerance)) {
            throw DataError("language '" + order[i] + "': probabilities sum to " +
                            format_number(sum) + ", expected 1");
        }
        // Undo the 12-significant-digit serialization drift; exact files
        // (sum == 1.0) pass through bit-identically.
        if (sum != 1.0) {
            for (double& p : probs[i]) p /= sum;
        }
        try {
            out.emplace_back(order[i],
                             PhonemeDistribution(std::move(probs[i]), std::move(ids[i])));
        } catch (const std::invalid_argument& e) {
            throw DataError("language '" + order[i] + "': " + e.what());
        }
    }
    return out;
}

/// Read a trajectories.csv. Returns (language label, pis series) in
/// first-appearance order; rows of one language must appear in step order.
inline std::vector<std::pair<std::string, std::vector<int>>> read_trajectories_csv(
    std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty trajectories file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "language_index,step,pis") {
        throw DataError("expected header 'language_index,step,pis'");
    }

    std::vector<std::pair<std::string, std::vector<int>>> out;
    std::map<std::string, std::size_t> index;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_row(line);
        if (fields.size() != 3) {
            throw DataError("line " + std::to_string(line_number) + ": expected 3 fields");
        }
        const auto [it, fresh] = index.try_emplace(fields[0], out.size());
        if (fresh) out.emplace_back(fields[0], std::vector<int>{});
        const std::size_t slot = it->second;
        const long long step = detail::parse_csv_int(fields[1], line_number);
        if (static_cast<std::size_t>(step) != out[slot].second.size()) {
            throw DataError("line " + std::to_string(line_number) +
                            ": steps of a language must be consecutive from 0");
        }
        out[slot].second.push_back(
            static_cast<int>(detail::parse_csv_int(fields[2], line_number)));
    }
    return out;
}

}  // namespace phonosim
