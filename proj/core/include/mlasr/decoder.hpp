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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mlasr/corpus.hpp"

namespace mlasr {

struct NBestEntry {
  std::string text;
  double score = 0.0;

  friend bool operator==(const NBestEntry&, const NBestEntry&) = default;
};

// Stand-in for an acoustic model: maps an utterance to a transcript.
// Implementations are deterministic and total.
class Decoder {
 public:
  virtual ~Decoder() = default;

  virtual std::string decode(const Utterance& utt) const = 0;

  // Best-first candidate list. The default wraps decode() with score 0.
  virtual std::vector<NBestEntry> nbest(const Utterance& utt) const;
};

// Replays precomputed hypotheses. A missing utt_id is a DataError.
//   TSV:   utt_id \t hypothesis
//   JSONL: {"utt_id": ..., "nbest": [{"text": ..., "score": ...}, ...]}
//          or {"utt_id": ..., "text": ...}
class ReplayDecoder final : public Decoder {
 public:
  ReplayDecoder() = default;
  explicit ReplayDecoder(std::unordered_map<std::string, std::vector<NBestEntry>> table);

  // Format is detected from the first non-blank character.
  static ReplayDecoder parse(std::string_view content, std::string_view source_name = "<memory>");
  static ReplayDecoder load(const std::filesystem::path& path);
  // Echoes each utterance's own reference text.
  static ReplayDecoder echo(const Manifest& m);

  std::string decode(const Utterance& utt) const override;
  std::vector<NBestEntry> nbest(const Utterance& utt) const override;
  std::size_t size() const noexcept { return table_.size(); }

 private:
  const std::vector<NBestEntry>& lookup(const std::string& utt_id) const;

  std::unordered_map<std::string, std::vector<NBestEntry>> table_;
};

struct SyntheticDecoderConfig {
  // Probability that a non-whitespace reference character is corrupted.
  double char_error_rate = 0.0;
  // Split of corruptions into substitution / deletion / insertion.
  double p_sub = 0.6;
  double p_del = 0.2;
  double p_ins = 0.2;
  // Replacement characters per language; default_pool serves unlabeled
  // utterances and languages without their own pool.
  std::map<LanguageId, std::u32string> pools;
  std::u32string default_pool;
  // Fraction of substituted or inserted characters drawn from another
  // language's pool.
  double cross_script_rate = 0.0;
  // When set, utterances of any other language come out entirely in this
  // language's script: a decoder handed audio it was not trained on.
  std::optional<LanguageId> script_lock;
  std::uint64_t seed = 0;

  void validate() const;
};

// Seeded character-level noisy channel over the reference text. RNG state
// is derived from (seed, utt_id), so results are independent of call order.
class SyntheticDecoder final : public Decoder {
 public:
  explicit SyntheticDecoder(SyntheticDecoderConfig config);

  std::string decode(const Utterance& utt) const override;
  const SyntheticDecoderConfig& config() const noexcept { return config_; }

 private:
  const std::u32string& pool_for(const std::optional<LanguageId>& lang) const;

  SyntheticDecoderConfig config_;
  std::vector<LanguageId> pool_order_;
};

}  // namespace mlasr
