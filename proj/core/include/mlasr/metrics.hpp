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

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlasr/corpus.hpp"

namespace mlasr {

using Tokens = std::vector<std::string>;

// Whitespace split; never produces empty tokens.
Tokens tokenize(std::string_view text);

// Unordered {latin, native} word pairs treated as equal when scoring.
class TransliterationTable {
 public:
  TransliterationTable() = default;
  explicit TransliterationTable(LanguageId native_script) : native_script_(std::move(native_script)) {}

  // Throws DataError when both words are Latin script or either is empty.
  void add(std::string latin_word, std::string native_word);

  bool equivalent(std::string_view a, std::string_view b) const;
  bool empty() const noexcept { return size_ == 0; }
  std::size_t size() const noexcept { return size_; }
  const LanguageId& native_script() const noexcept { return native_script_; }

  // TSV "latin\tnative" per line; blank lines and "#" comments skipped.
  static TransliterationTable parse(std::string_view tsv, LanguageId native_script = {},
                                    std::string_view source_name = "<memory>");
  static TransliterationTable load(const std::filesystem::path& path, LanguageId native_script = {});

 private:
  std::map<std::string, std::set<std::string>, std::less<>> links_;
  LanguageId native_script_;
  std::size_t size_ = 0;
};

enum class EditOp { kMatch, kSubstitution, kDeletion, kInsertion };

struct AlignedPair {
  EditOp op = EditOp::kMatch;
  std::string ref;  // empty for insertions
  std::string hyp;  // empty for deletions

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

struct Alignment {
  std::vector<AlignedPair> ops;
  std::size_t cost = 0;

  std::size_t count(EditOp op) const noexcept;
  // Hypothesis reconstructed by applying ops to the reference.
  Tokens replay() const;
};

// Minimum edit distance alignment. A substitution between equivalent tokens
// (table lookup) costs nothing and is recorded as a match. Ties in cost go
// to the alignment with fewer deletions + insertions, so swapping ref and
// hyp swaps the del/ins counts exactly. Backtrace then prefers
// match/substitution, then deletion, then insertion.
Alignment align(std::span<const std::string> ref, std::span<const std::string> hyp,
                const TransliterationTable* equiv = nullptr);

// Edit distance only; O(min) memory. Same cost as align().cost.
std::size_t edit_distance(std::span<const std::string> ref, std::span<const std::string> hyp,
                          const TransliterationTable* equiv = nullptr);

struct WerStats {
  std::size_t n_ref = 0;
  std::size_t sub = 0;
  std::size_t del = 0;
  std::size_t ins = 0;

  std::size_t errors() const noexcept { return sub + del + ins; }
  double wer_percent() const noexcept {
    return n_ref == 0 ? 0.0 : 100.0 * static_cast<double>(errors()) / static_cast<double>(n_ref);
  }
  WerStats& operator+=(const WerStats& o) noexcept {
    n_ref += o.n_ref;
    sub += o.sub;
    del += o.del;
    ins += o.ins;
    return *this;
  }
  friend bool operator==(const WerStats&, const WerStats&) = default;
};

WerStats stats_from(const Alignment& a, std::size_t n_ref);

// Throw DataError on an empty reference.
WerStats wer(std::span<const std::string> ref, std::span<const std::string> hyp);
WerStats t_wer(std::span<const std::string> ref, std::span<const std::string> hyp,
               const TransliterationTable& table);

// Half-up rounding to `decimals` places, tolerant of binary representation
// error (23.855 rounds to 23.86).
double round_half_up(double value, int decimals = 2);

// Unweighted mean; 0 for an empty list.
double macro_average(std::span<const double> values);

struct ScoredPair {
  std::string group;
  Tokens ref;
  Tokens hyp;
};

struct CorpusWer {
  WerStats pooled;
  std::map<std::string, WerStats> by_group;
  // Unweighted mean of by_group wer_percent.
  double macro_average = 0.0;

  std::string to_json() const;
};

// Throws DataError when any reference is empty.
CorpusWer corpus_wer(std::span<const ScoredPair> pairs, const TransliterationTable* table = nullptr,
                     int jobs = 1);

// "WER 33.33 [ 1 / 3, 0 ins, 0 del, 1 sub ]"
std::string format_wer_line(std::string_view label, const WerStats& s);

}  // namespace mlasr
