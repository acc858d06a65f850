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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlasr/corpus.hpp"
#include "mlasr/textnorm.hpp"

namespace mlasr {

// Character inventory of one language. freq keys are a subset of chars.
struct Vocab {
  LanguageId language;
  std::set<char32_t> chars;
  CharFrequency freq;

  std::size_t size() const noexcept { return chars.size(); }
  bool contains(char32_t c) const { return chars.contains(c); }

  friend bool operator==(const Vocab&, const Vocab&) = default;
};

// Vocab built from the texts of m labeled lang. Throws DataError when the
// result would be empty.
Vocab build_vocab(const Manifest& m, const LanguageId& lang);

// Character union with summed frequencies. Throws DataError on empty input.
Vocab vocab_union(std::span<const Vocab> vocabs, const LanguageId& name);

struct VocabDiff {
  std::set<char32_t> only_a;
  std::set<char32_t> only_b;
  std::set<char32_t> shared;

  std::size_t symmetric_size() const noexcept { return only_a.size() + only_b.size(); }
};

VocabDiff vocab_diff(const Vocab& a, const Vocab& b);

// Immutable set of vocabs plus derived overlap data. Every mutation returns
// a new registry with the shared set and character index recomputed.
class VocabRegistry {
 public:
  VocabRegistry() = default;
  explicit VocabRegistry(std::vector<Vocab> vocabs,
                         std::map<LanguageId, LanguageId> relabel = {});

  const std::map<LanguageId, Vocab>& vocabs() const noexcept { return vocabs_; }
  const std::set<char32_t>& shared() const noexcept { return shared_; }
  // Old id -> merged id, accumulated over merge_languages calls.
  const std::map<LanguageId, LanguageId>& relabel_map() const noexcept { return relabel_; }

  std::vector<LanguageId> languages() const;
  bool contains(const LanguageId& id) const { return vocabs_.contains(id); }
  const Vocab& at(const LanguageId& id) const;

  // Languages whose vocab contains c, in id order. Empty span when none.
  std::span<const LanguageId> owners(char32_t c) const;

  // Maps merged-away language labels in m onto their merged id.
  Manifest relabel(const Manifest& m) const;

  VocabRegistry with(Vocab v) const;

 private:
  std::map<LanguageId, Vocab> vocabs_;
  std::set<char32_t> shared_;
  std::map<char32_t, std::vector<LanguageId>> owners_;
  std::map<LanguageId, LanguageId> relabel_;
};

struct MergeCandidate {
  LanguageId a;
  LanguageId b;
  std::size_t sym_diff = 0;

  friend bool operator==(const MergeCandidate&, const MergeCandidate&) = default;
};

inline constexpr std::size_t kDefaultMaxSymDiff = 2;

// Unordered pairs (a < b) with symmetric difference <= max_sym_diff, sorted
// by size then ids.
std::vector<MergeCandidate> propose_mergers(const VocabRegistry& reg,
                                            std::size_t max_sym_diff = kDefaultMaxSymDiff);

// Replaces a and b by their union under merged. Throws DataError when either
// id is unknown, a == b, or merged names a third existing language.
VocabRegistry merge_languages(const VocabRegistry& reg, const LanguageId& a,
                              const LanguageId& b, const LanguageId& merged);

// Throws DataError when rules would delete a character some vocab declares.
void check_cleaning_rules(const CleaningRules& rules, const VocabRegistry& reg);

// Vocab file: "#lang <id>\n" then "<char>\t<count>\n" sorted by codepoint.
// Characters without a frequency are written with count 0.
std::string serialize_vocab(const Vocab& v);
Vocab parse_vocab(std::string_view text, std::string_view source_name = "<memory>");
void write_vocab(const Vocab& v, const std::filesystem::path& path);
Vocab load_vocab(const std::filesystem::path& path);

}  // namespace mlasr
