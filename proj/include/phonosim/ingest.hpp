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
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phonosim/core.hpp"

namespace phonosim {

/// Parse failure carrying the 1-based line number of the offending input.
struct ParseError : std::runtime_error {
    ParseError(std::size_t line_number, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
    std::size_t line;
};

/// A language ended up with fewer than two positive-count phonemes.
struct InventoryTooSmallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhonemeCount {
    std::string label;
    long long count = 0;

    bool operator==(const PhonemeCount&) const = default;
};

/// Raw per-language phoneme counts as read from a data file. Labels are
/// opaque strings; the input is assumed pre-tokenized.
struct LanguageFrequencyTable {
    std::string language_id;
    std::vector<PhonemeCount> entries;

    bool operator==(const LanguageFrequencyTable&) const = default;
};

namespace detail {

// Strips one trailing CR so both LF and CRLF files parse.
inline bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

inline long long parse_count(std::string_view text, std::size_t line_number) {
    long long value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || value < 0) {
        throw ParseError(line_number, "count must be a non-negative integer, got '" +
                                          std::string(text) + "'");
    }
    return value;
}

class TableBuilder {
public:
    void add(const std::string& language, const std::string& phoneme, long long count,
             std::size_t line_number) {
        auto [it, inserted] = index_.try_emplace(language, tables_.size());
        if (inserted) tables_.push_back({language, {}});
        LanguageFrequencyTable& table = tables_[it->second];
        if (!seen_[language].insert(phoneme).second) {
            throw ParseError(line_number, "duplicate phoneme '" + phoneme +
                                              "' for language '" + language + "'");
        }
        table.entries.push_back({phoneme, count});
    }

    void accumulate(const std::string& language, const std::string& phoneme, long long count) {
        auto [it, inserted] = index_.try_emplace(language, tables_.size());
        if (inserted) tables_.push_back({language, {}});
        LanguageFrequencyTable& table = tables_[it->second];
        auto [pos_it, fresh] = positions_[language].try_emplace(phoneme, table.entries.size());
        if (fresh) {
            table.entries.push_back({phoneme, count});
        } else {
            table.entries[pos_it->second].count += count;
        }
    }

    std::vector<LanguageFrequencyTable> take() { return std::move(tables_); }

private:
    std::vector<LanguageFrequencyTable> tables_;
    std::map<std::string, std::size_t> index_;
    std::map<std::string, std::set<std::string>> seen_;
    std::map<std::string, std::map<std::string, std::size_t>> positions_;
};

}  // namespace detail

/// Parse a `language,phoneme,count` CSV into per-language count tables,
/// preserving the file order of languages. The phoneme field may contain any
/// non-comma characters. Blank lines are ignored; duplicates and malformed
/// rows raise ParseError with the line number.
inline std::vector<LanguageFrequencyTable> parse_frequency_csv(std::istream& in) {
    std::string line;
    if (!detail::next_line(in, line) || line != "language,phoneme,count") {
        throw ParseError(1, "expected header 'language,phoneme,count'");
    }

    detail::TableBuilder builder;
    std::size_t line_number = 1;
    while (detail::next_line(in, line)) {
        ++line_number;
        if (line.empty()) continue;

        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            line.find(',', c2 + 1) != std::string::npos) {
            throw ParseError(line_number, "expected exactly 3 comma-separated fields");
        }
        const std::string language = line.substr(0, c1);
        const std::string phoneme = line.substr(c1 + 1, c2 - c1 - 1);
        if (language.empty() || phoneme.empty()) {
            throw ParseError(line_number, "language and phoneme fields must be non-empty");
        }
        const long long count =
            detail::parse_count(std::string_view(line).substr(c2 + 1), line_number);
        builder.add(language, phoneme, count, line_number);
    }
    return builder.take();
}

/// Parse a `language<TAB>tokens` wordlist into per-language token counts
/// (every occurrence counts). `tokens` is a space-separated sequence of
/// phoneme symbols for one word form; counts accumulate over all words of
/// a language.
inline std::vector<LanguageFrequencyTable> parse_wordlist_tsv(std::istream& in) {
    std::string line;
    if (!detail::next_line(in, line) || line != "language\ttokens") {
        throw ParseError(1, "expected header 'language<TAB>tokens'");
    }

    detail::TableBuilder builder;
    std::size_t line_number = 1;
    while (detail::next_line(in, line)) {
        ++line_number;
        if (line.empty()) continue;

        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw ParseError(line_number, "expected exactly 2 tab-separated fields");
        }
        const std::string language = line.substr(0, tab);
        if (language.empty()) {
            throw ParseError(line_number, "language field must be non-empty");
        }

        std::istringstream tokens(line.substr(tab + 1));
        std::string token;
        std::size_t n_tokens = 0;
        while (tokens >> token) {
            builder.accumulate(language, token, 1);
            ++n_tokens;
        }
        if (n_tokens == 0) {
            throw ParseError(line_number, "word form has no tokens");
        }
    }
    return builder.take();
}

/// Turn counts into a normalized distribution. Zero-count phonemes are
/// dropped; phoneme ids are assigned 0..V-1 in entry order of the surviving
/// phonemes, and the id->label pairing is reported through `labels_out`
/// when provided.
inline PhonemeDistribution to_distribution(const LanguageFrequencyTable& table,
                                           std::vector<std::string>* labels_out = nullptr) {
    long long total = 0;
    std::size_t positive = 0;
    for (const auto& e : table.entries) {
        if (e.count < 0) throw std::invalid_argument("negative count for '" + e.label + "'");
        if (e.count > 0) {
            total += e.count;
            ++positive;
        }
    }
    if (positive < 2) {
        throw InventoryTooSmallError("language '" + table.language_id +
                                     "' has fewer than 2 positive-count phonemes");
    }

    std::vector<double> probs;
    std::vector<PhonemeId> ids;
    probs.reserve(positive);
    ids.reserve(positive);
    if (labels_out) labels_out->clear();
    for (const auto& e : table.entries) {
        if (e.count == 0) continue;
        probs.push_back(static_cast<double>(e.count) / static_cast<double>(total));
        ids.push_back(static_cast<PhonemeId>(ids.size()));
        if (labels_out) labels_out->push_back(e.label);
    }
    return PhonemeDistribution(std::move(probs), std::move(ids));
}

/// Serialize tables back to the frequency-CSV format (LF line endings).
/// parse_frequency_csv(write_frequency_csv(tables)) is the identity.
inline void write_frequency_csv(std::ostream& out,
                                const std::vector<LanguageFrequencyTable>& tables) {
    out << "language,phoneme,count\n";
    for (const auto& table : tables) {
        for (const auto& e : table.entries) {
            out << table.language_id << ',' << e.label << ',' << e.count << '\n';
        }
    }
}

}  // namespace phonosim
