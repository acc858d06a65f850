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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mlasr/vocab.hpp"

namespace mlasr::lm {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";
inline constexpr double kDiscount = 0.75;
inline constexpr std::size_t kDefaultLexiconSize = 500000;
inline constexpr int kMaxOrder = 5;
// log10 probability written for "<s>", which is never predicted.
inline constexpr double kBosLogProb = -99.0;

// Drops words containing a character outside vocab.chars; lines left empty
// are dropped entirely.
std::vector<std::string> clean_lm_corpus(std::span<const std::string> texts, const Vocab& vocab);

struct Lexicon {
  // Descending frequency, ties in byte order.
  std::vector<std::pair<std::string, std::uint64_t>> words;

  bool contains(std::string_view w) const;
  std::size_t size() const noexcept { return words.size(); }

  // "word\tfreq" lines.
  std::string serialize() const;
  static Lexicon parse(std::string_view tsv, std::string_view source_name = "<memory>");
};

// Top-k words by frequency. Throws DataError when k == 0.
Lexicon build_lexicon(std::span<const std::string> texts, std::size_t k = kDefaultLexiconSize);

using WordId = std::uint32_t;
using NGram = std::vector<WordId>;

// Back-off n-gram model. Trained models are interpolated Kneser-Ney with a
// fixed discount, stored in back-off form (as in ARPA) so a model read from
// ARPA scores identically. Trained models also retain raw counts so they can
// be re-estimated with pruning thresholds.
class NGramModel {
 public:
  struct Entry {
    double logprob = 0.0;
    double backoff = 0.0;  // log10; 0 when the n-gram has no extensions
  };

  int order() const noexcept { return order_; }

  // Every word in the unigram table, including specials.
  const std::vector<std::string>& words() const noexcept { return words_; }
  // Words that can be predicted: all unigrams except "<s>".
  std::vector<std::string> predictable_words() const;

  std::optional<WordId> id(std::string_view word) const;
  // Unknown words map to "<unk>".
  WordId id_or_unk(std::string_view word) const;

  // log10 p(word | context). Context is oldest-first and may be longer than
  // order-1; only the tail is used. context may start with "<s>".
  double logprob(std::span<const std::string> context, std::string_view word) const;
  double logprob_ids(std::span<const WordId> context, WordId word) const;

  // log10 probability of a sentence, including the end marker.
  double score(std::span<const std::string> tokens) const;

  double unk_logprob() const;

  std::size_t ngram_count(int n) const;
  const std::map<NGram, Entry>& table(int n) const;
  std::string render(const NGram& g) const;

  // Every stored n-gram of order < order() plus the empty context; the set
  // of histories the model can condition on.
  std::vector<NGram> contexts() const;

  bool has_counts() const noexcept { return !raw_counts_.empty(); }
  // Raw corpus count of an n-gram; 0 when unseen or counts unavailable.
  std::uint64_t count(std::span<const std::string> ngram) const;

  std::string to_arpa() const;
  static NGramModel from_arpa(std::string_view text, std::string_view source_name = "<memory>");
  void write_arpa(const std::filesystem::path& path) const;
  static NGramModel load_arpa(const std::filesystem::path& path);

 private:
  friend NGramModel train_ngram(std::span<const std::string>, int, const Lexicon&);
  friend NGramModel prune_ngram(const NGramModel&, std::span<const std::uint64_t>);

  void estimate(std::span<const std::uint64_t> min_counts);
  WordId intern(std::string_view w);

  int order_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
  WordId bos_ = 0, eos_ = 0, unk_ = 0;
  std::vector<std::map<NGram, Entry>> tables_;               // index n-1
  std::vector<std::map<NGram, std::uint64_t>> raw_counts_;   // index n-1
};

// Pads each line with sentence markers and maps words outside the lexicon to
// "<unk>". Throws DataError for order outside [1, 5] or an empty corpus.
NGramModel train_ngram(std::span<const std::string> texts, int order, const Lexicon& lexicon);

// Re-estimates without n-grams (n >= 2) whose raw count is below
// min_counts[n-1]. min_counts has one entry per order, must be
// non-decreasing, and its unigram entry must be <= 1. Requires raw counts.
NGramModel prune_ngram(const NGramModel& model, std::span<const std::uint64_t> min_counts);

inline double score(const NGramModel& model, std::span<const std::string> tokens) {
  return model.score(tokens);
}

// Per-token perplexity (end markers counted) over tokenized sentences.
double perplexity(const NGramModel& model, std::span<const std::vector<std::string>> sentences);

struct Hypothesis {
  std::string utt_id;
  std::string text;
  double acoustic_score = 0.0;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

inline constexpr std::size_t kDefaultBeam = 3000;

struct RescoreConfig {
  double alpha = 0.5;
  double beta = 0.0;
  std::size_t beam = kDefaultBeam;
};

struct Rescored {
  Hypothesis hypothesis;
  std::size_t index = 0;  // position in the input list
  double lm_score = 0.0;
  double total_score = 0.0;
};

// Keeps the `beam` best hypotheses by acoustic score, then picks the maximum
// of acoustic + alpha * lm + beta * words. Ties go to the lower input index.
Rescored rescore_nbest(std::span<const Hypothesis> hyps, const NGramModel& model,
                       const RescoreConfig& config = {});

}  // namespace mlasr::lm
