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

// Command implementations behind the phonosim executable.  Each cmd_*
// function performs one subcommand end to end and returns a process exit
// code: 0 on success, 1 for configuration problems, 2 for data problems.

#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "phonosim/engine.hpp"
#include "phonosim/ingest.hpp"
#include "phonosim/io.hpp"
#include "phonosim/stats.hpp"

namespace phonosim {

namespace detail {

inline unsigned default_worker_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

inline void ensure_output_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
    if (!std::filesystem::is_directory(dir)) {
        throw ConfigError("output path '" + dir.string() + "' is not a directory");
    }
}

// Writes one output file and records its digest for the run manifest.
inline void emit_output(const std::filesystem::path& dir, const std::string& name,
                        const std::string& content,
                        std::vector<std::pair<std::string, std::string>>& digests) {
    write_text_file(dir / name, content);
    digests.emplace_back(name, fnv1a64_hex(content));
}

inline std::ifstream open_input_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file '" + path.string() + "'");
    return in;
}

}  // namespace detail

struct SimulateOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> preset;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
};

struct AnalyzeOptions {
    std::string input_dir;
    std::string out_dir = ".";
};

struct IngestOptions {
    std::string input_file;
    std::string format = "freq-csv";  // freq-csv | wordlist-tsv
    std::string out_dir = ".";
};

struct CompareOptions {
    std::string left_dir;
    std::string right_dir;
    std::optional<std::string> out_dir;
};

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

inline int cmd_simulate(const SimulateOptions& opts, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
    try {
        if (opts.config_path.has_value() == opts.preset.has_value()) {
            throw ConfigError("exactly one of --config and --preset is required");
        }
        SimulationConfig config;
        if (opts.config_path) {
            config = load_simulation_config(*opts.config_path);
        } else {
            config = preset_config(*opts.preset);
        }
        if (opts.seed) config.master_seed = *opts.seed;
        config.validate();

        const std::filesystem::path dir(opts.out_dir);
        detail::ensure_output_directory(dir);

        const auto records = run_ensemble(config, detail::default_worker_count());

        std::vector<std::pair<std::string, std::string>> digests;
        detail::emit_output(dir, "trajectories.csv", trajectories_csv(records), digests);
        detail::emit_output(dir, "final_distributions.csv", final_distributions_csv(records),
                            digests);
        const std::string manifest = manifest_json(config, digests, utc_timestamp_now());
        write_text_file(dir / "manifest.json", manifest);

        out << "simulated " << records.size() << " languages for " << config.n_steps
            << " steps (seed " << config.master_seed << ") -> " << dir.string() << "\n";
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

inline int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    try {
        const std::filesystem::path in_dir(opts.input_dir);
        const auto finals_path = in_dir / "final_distributions.csv";
        if (!std::filesystem::exists(finals_path)) {
            throw DataError("missing input file '" + finals_path.string() + "'");
        }
        auto finals_stream = detail::open_input_file(finals_path);
        const auto labeled = read_final_distributions_csv(finals_stream);
        if (labeled.empty()) throw DataError("no languages in '" + finals_path.string() + "'");

        const std::filesystem::path dir(opts.out_dir);
        detail::ensure_output_directory(dir);

        // Rank-frequency rows for every language, in input order.
        std::string rank_csv;
        {
            std::vector<RankFrequencyTable> tables;
            tables.reserve(labeled.size());
            for (const auto& [label, dist] : labeled) {
                tables.push_back(rank_frequency(dist, label));
            }
            rank_csv = rank_frequency_csv(tables);
        }

        // Per-language inventory size and relative entropy, plus the
        // correlation/regression between them.
        std::vector<std::pair<std::string, EntropySummary>> summaries;
        summaries.reserve(labeled.size());
        std::vector<int> pis_values;
        std::vector<double> rel_entropies;
        for (const auto& [label, dist] : labeled) {
            const auto summary = summarize_entropy(dist);
            summaries.emplace_back(label, summary);
            pis_values.push_back(summary.pis);
            rel_entropies.push_back(summary.relative_entropy);
        }

        std::optional<CorrelationResult> correlation;
        std::string degenerate_reason;
        try {
            std::vector<double> log_pis(pis_values.size());
            for (std::size_t i = 0; i < pis_values.size(); ++i) {
                log_pis[i] = std::log(static_cast<double>(pis_values[i]));
            }
            correlation = pearson(log_pis, rel_entropies);
        } catch (const DegenerateVarianceError& e) {
            degenerate_reason = e.what();
        } catch (const std::invalid_argument& e) {
            degenerate_reason = e.what();
        }

        std::string regression_out = "x,fit,lower95,upper95\n";
        try {
            const auto fit = loglinear_fit(pis_values, rel_entropies);
            regression_out = regression_csv(fit);
        } catch (const DegenerateVarianceError&) {
            // Regression is undefined when every language has the same
            // inventory size; emit the header so the schema stays stable.
        } catch (const std::invalid_argument&) {
        }

        std::vector<std::pair<std::string, std::string>> digests;
        detail::emit_output(dir, "rank_frequency.csv", rank_csv, digests);
        detail::emit_output(dir, "pis_entropy.csv", pis_entropy_csv(summaries), digests);
        detail::emit_output(dir, "correlation.json",
                            correlation_json(correlation, labeled.size(), degenerate_reason),
                            digests);
        detail::emit_output(dir, "regression.csv", regression_out, digests);

        // Envelope summary is only possible when step-by-step trajectories
        // were recorded next to the final distributions.
        const auto traj_path = in_dir / "trajectories.csv";
        if (std::filesystem::exists(traj_path)) {
            auto traj_stream = detail::open_input_file(traj_path);
            const auto trajectories = read_trajectories_csv(traj_stream);
            std::vector<std::vector<int>> series;
            series.reserve(trajectories.size());
            for (const auto& [label, pis_series] : trajectories) series.push_back(pis_series);
            const auto envelopes = pis_envelopes(series);
            detail::emit_output(dir, "envelopes.csv", envelopes_csv(envelopes), digests);
        }

        out << "analyzed " << labeled.size() << " languages -> " << dir.string() << "\n";
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

inline int cmd_ingest(const IngestOptions& opts, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
    try {
        if (opts.format != "freq-csv" && opts.format != "wordlist-tsv") {
            throw ConfigError("unknown --format '" + opts.format +
                              "' (expected freq-csv or wordlist-tsv)");
        }
        auto in = detail::open_input_file(opts.input_file);
        std::vector<LanguageFrequencyTable> tables;
        if (opts.format == "freq-csv") {
            tables = parse_frequency_csv(in);
        } else {
            tables = parse_wordlist_tsv(in);
        }

        std::vector<std::pair<std::string, PhonemeDistribution>> accepted;
        std::vector<std::pair<std::string, std::string>> rejected;  // language, reason
        for (const auto& table : tables) {
            try {
                accepted.emplace_back(table.language_id, to_distribution(table));
            } catch (const InventoryTooSmallError& e) {
                rejected.emplace_back(table.language_id, e.what());
            }
        }

        const std::filesystem::path dir(opts.out_dir);
        detail::ensure_output_directory(dir);

        std::string rejects = "language,reason\n";
        for (const auto& [language, reason] : rejected) {
            rejects += language;
            rejects += ',';
            rejects += reason;
            rejects += '\n';
        }

        std::vector<std::pair<std::string, std::string>> digests;
        detail::emit_output(dir, "final_distributions.csv", final_distributions_csv(accepted),
                            digests);
        detail::emit_output(dir, "rejects.csv", rejects, digests);

        out << "ingested " << accepted.size() << " languages (" << rejected.size()
            << " rejected) -> " << dir.string() << "\n";
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

namespace detail {

struct AnalysisSummaryForCompare {
    long long pis_min = 0;
    long long pis_max = 0;
    double relative_entropy_min = 0.0;
    double relative_entropy_max = 0.0;
    std::size_t n_languages = 0;
    std::optional<double> correlation_r;
    std::optional<double> correlation_p;
};

inline AnalysisSummaryForCompare load_analysis_summary(const std::filesystem::path& dir) {
    const auto pis_path = dir / "pis_entropy.csv";
    const auto corr_path = dir / "correlation.json";
    std::vector<std::string> missing;
    if (!std::filesystem::exists(pis_path)) missing.push_back(pis_path.string());
    if (!std::filesystem::exists(corr_path)) missing.push_back(corr_path.string());
    if (!missing.empty()) {
        std::string msg = "missing analysis files:";
        for (const auto& m : missing) msg += " '" + m + "'";
        throw DataError(msg);
    }

    AnalysisSummaryForCompare summary;
    {
        auto in = open_input_file(pis_path);
        std::string line;
        if (!std::getline(in, line)) throw DataError("empty file '" + pis_path.string() + "'");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != "language,pis,relative_entropy") {
            throw DataError("expected header 'language,pis,relative_entropy' in '" +
                            pis_path.string() + "'");
        }
        std::size_t line_number = 1;
        while (std::getline(in, line)) {
            ++line_number;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto fields = split_csv_row(line);
            if (fields.size() != 3) {
                throw DataError("line " + std::to_string(line_number) + ": expected 3 fields");
            }
            const long long pis = parse_csv_int(fields[1], line_number);
            const double rel = parse_csv_double(fields[2], line_number);
            if (summary.n_languages == 0) {
                summary.pis_min = summary.pis_max = pis;
                summary.relative_entropy_min = summary.relative_entropy_max = rel;
            } else {
                summary.pis_min = std::min(summary.pis_min, pis);
                summary.pis_max = std::max(summary.pis_max, pis);
                summary.relative_entropy_min = std::min(summary.relative_entropy_min, rel);
                summary.relative_entropy_max = std::max(summary.relative_entropy_max, rel);
            }
            ++summary.n_languages;
        }
        if (summary.n_languages == 0) {
            throw DataError("no data rows in '" + pis_path.string() + "'");
        }
    }
    {
        auto in = open_input_file(corr_path);
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw DataError("cannot parse '" + corr_path.string() + "': " + e.what());
        }
        if (doc.contains("r") && !doc["r"].is_null()) {
            summary.correlation_r = doc["r"].get<double>();
        }
        if (doc.contains("p_value") && !doc["p_value"].is_null()) {
            summary.correlation_p = doc["p_value"].get<double>();
        }
    }
    return summary;
}

inline std::string optional_number(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("NA");
}

inline std::string correlation_sign(const std::optional<double>& r) {
    if (!r) return "NA";
    if (*r > 0.0) return "positive";
    if (*r < 0.0) return "negative";
    return "zero";
}

}  // namespace detail

inline int cmd_compare(const CompareOptions& opts, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    try {
        const auto left = detail::load_analysis_summary(opts.left_dir);
        const auto right = detail::load_analysis_summary(opts.right_dir);

        std::string csv = "metric,simulated,empirical\n";
        const auto add_row = [&csv](const std::string& metric, const std::string& a,
                                    const std::string& b) {
            csv += metric;
            csv += ',';
            csv += a;
            csv += ',';
            csv += b;
            csv += '\n';
        };
        add_row("n_languages", std::to_string(left.n_languages),
                std::to_string(right.n_languages));
        add_row("pis_min", std::to_string(left.pis_min), std::to_string(right.pis_min));
        add_row("pis_max", std::to_string(left.pis_max), std::to_string(right.pis_max));
        add_row("relative_entropy_min", format_number(left.relative_entropy_min),
                format_number(right.relative_entropy_min));
        add_row("relative_entropy_max", format_number(left.relative_entropy_max),
                format_number(right.relative_entropy_max));
        add_row("correlation_sign", detail::correlation_sign(left.correlation_r),
                detail::correlation_sign(right.correlation_r));
        add_row("correlation_r", detail::optional_number(left.correlation_r),
                detail::optional_number(right.correlation_r));
        add_row("correlation_p", detail::optional_number(left.correlation_p),
                detail::optional_number(right.correlation_p));

        if (opts.out_dir) {
            const std::filesystem::path dir(*opts.out_dir);
            detail::ensure_output_directory(dir);
            write_text_file(dir / "comparison.csv", csv);
        }
        out << csv;
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace phonosim
