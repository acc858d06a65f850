// Copyright 2026 The mlasr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "mlasr/corpus.hpp"

namespace mlasr {

// Counts of Unicode scalars (after NFC). Whitespace is never counted.
struct CharFrequency {
  std::map<char32_t, std::uint64_t> counts;

  std::uint64_t total() const noexcept;
  std::uint64_t operator[](char32_t c) const noexcept;
  void add(std::string_view text);
  void merge(const CharFrequency& other);

  friend bool operator==(const CharFrequency&, const CharFrequency&) = default;
};

CharFrequency char_frequency(std::span<const std::string> texts);

struct CleaningRules {
  std::set<char32_t> removal_set;
  bool collapse_whitespace = true;
  bool lowercase_latin = false;

  // Unicode punctuation (Po Ps Pe Pd Pi Pf) except apostrophe and hyphens.
  static CleaningRules defaults();

  // JSON: {"removal_set": "default" | [str, ...], "collapse_whitespace": bool,
  //        "lowercase_latin": bool}. Missing keys keep the defaults.
  static CleaningRules from_json(std::string_view json);
  std::string to_json() const;

  friend bool operator==(const CleaningRules&, const CleaningRules&) = default;
};

// Deletes removal_set characters, optionally lowercases Latin letters and
// collapses whitespace runs, then trims. Idempotent.
std::string clean_text(std::string_view text, const CleaningRules& rules);

// Applies clean_text to every entry.
Manifest clean_manifest(const Manifest& m, const CleaningRules& rules);

inline constexpr std::uint64_t kDefaultRareThreshold = 10;

struct RareSymbolResult {
  Manifest manifest;
  // Removed characters with the corpus frequency that condemned them.
  std::map<char32_t, std::uint64_t> removed;
};

// Removes every character whose corpus frequency is strictly below
// threshold. When any entry carries a split label, frequency is counted over
// the "train" entries only and the deletion applies to all entries.
// Only entries that lost a character are re-collapsed.
RareSymbolResult rare_symbol_filter(const Manifest& m, std::uint64_t threshold = kDefaultRareThreshold);

// "<char>\t<freq>\n" per removed symbol, ordered by codepoint.
std::string format_removed_report(const std::map<char32_t, std::uint64_t>& removed);

}  // namespace mlasr
