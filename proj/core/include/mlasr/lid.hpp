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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlasr/corpus.hpp"
#include "mlasr/vocab.hpp"

namespace mlasr {

struct LidPolicy {
  // Characters owned by more than one vocab do not vote.
  bool ignore_shared = true;
  // Must list every registry language exactly once; earlier wins ties.
  std::vector<LanguageId> tie_break_order;
  LanguageId fallback;
  // Utterances with fewer voting characters route to fallback.
  std::size_t min_votes = 1;

  // Ids in lexicographic order; fallback is the first of them.
  static LidPolicy for_registry(const VocabRegistry& reg);

  // Throws DataError when tie_break_order or fallback disagree with reg.
  void validate(const VocabRegistry& reg) const;

  // JSON: {"ignore_shared": bool, "tie_break_order": [id...], "fallback": id,
  //        "min_votes": int}. Missing keys come from for_registry(reg).
  static LidPolicy from_json(std::string_view json, const VocabRegistry& reg);
  std::string to_json() const;
};

struct LidResult {
  LanguageId predicted;
  // Only languages with at least one vote appear.
  std::map<LanguageId, std::size_t> votes;
  // Characters that cast at least one vote.
  std::size_t total_voting_chars = 0;
  double confidence = 0.0;
  bool tie = false;
  bool used_fallback = false;

  friend bool operator==(const LidResult&, const LidResult&) = default;
};

// Languages whose vocab contains c.
std::vector<LanguageId> classify_char(char32_t c, const VocabRegistry& reg);

// Majority vote over the NFC scalars of text.
LidResult identify_language(std::string_view text, const VocabRegistry& reg,
                            const LidPolicy& policy);

struct ConfusionMatrix {
  // gold -> predicted -> count
  std::map<LanguageId, std::map<LanguageId, std::size_t>> counts;
  std::size_t total = 0;
  std::size_t correct = 0;

  double accuracy() const noexcept {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
  void add(const LanguageId& gold, const LanguageId& predicted);
  std::string to_json() const;
};

struct LidLabel {
  std::string utt_id;
  std::optional<LanguageId> gold;
  LidResult result;
};

struct BatchLidResult {
  // language field replaced with the prediction
  Manifest labeled;
  // one per entry, utt_id order
  std::vector<LidLabel> labels;
  // present when at least one entry had a gold label
  std::optional<ConfusionMatrix> confusion;
};

BatchLidResult batch_identify(const Manifest& m, const VocabRegistry& reg,
                              const LidPolicy& policy, int jobs = 1);

// "utt_id\tpredicted\tconfidence\ttie\n" rows, confidence with 4 decimals.
std::string format_lid_tsv(const std::vector<LidLabel>& labels);

}  // namespace mlasr
