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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlasr/corpus.hpp"
#include "mlasr/decoder.hpp"
#include "mlasr/lid.hpp"
#include "mlasr/lm.hpp"
#include "mlasr/metrics.hpp"
#include "mlasr/vocab.hpp"

namespace mlasr {

enum class LidSource { kRaw, kRescored };

struct PipelineOptions {
  int jobs = 1;
  // When set, every decode is also rescored from the decoder's n-best list
  // and a second set of aggregates ("with LM") is reported.
  const lm::NGramModel* lm = nullptr;
  lm::RescoreConfig rescore{};
  // Which common-model output feeds LID in run_m2.
  LidSource lid_source = LidSource::kRaw;
  // run_m2 routes by gold label instead of predicted language.
  bool oracle_lid = false;
};

struct UtteranceRow {
  std::string utt_id;
  // Aggregation key: gold language, pair label, or "unknown".
  std::string group;
  std::optional<LanguageId> gold;
  std::optional<LanguageId> predicted;
  double lid_confidence = 0.0;
  bool lid_tie = false;
  bool lid_fallback = false;
  std::string ref;
  std::string hyp;
  WerStats wer;
  std::optional<WerStats> t_wer;
  std::optional<std::string> hyp_lm;
  std::optional<WerStats> wer_lm;
  std::optional<WerStats> t_wer_lm;
};

struct PipelineReport {
  std::string system;  // "m1", "m2", "c1", "c2"
  std::vector<UtteranceRow> rows;

  CorpusWer wer;
  std::optional<CorpusWer> t_wer;
  std::optional<CorpusWer> wer_lm;
  std::optional<CorpusWer> t_wer_lm;
  std::optional<ConfusionMatrix> lid;

  // Recomputes every aggregate from rows.
  void finalize();

  std::string to_json() const;
  // Plain-text table: one row per group, then the macro average.
  std::string to_table() const;
};

// Approach with one common model: decode everything with `common`.
PipelineReport run_m1(const Decoder& common, const Manifest& m,
                      const TransliterationTable* table = nullptr, const PipelineOptions& options = {});

using DecoderMap = std::map<LanguageId, const Decoder*>;

// Common model -> character LID -> monolingual model of the predicted
// language. `monolingual` must cover every registry language.
PipelineReport run_m2(const Decoder& common, const DecoderMap& monolingual, const VocabRegistry& reg,
                      const LidPolicy& policy, const Manifest& m,
                      const TransliterationTable* table = nullptr, const PipelineOptions& options = {});

enum class CodeSwitchMode { kC1, kC2 };

// Code-switched evaluation with WER and T-WER. C1 uses the single decoder in
// `decoders` for every pair; C2 selects the decoder by the utterance's pair
// label. No LID stage is run.
PipelineReport run_codeswitch(const DecoderMap& decoders, const Manifest& m, const TransliterationTable& table,
                              CodeSwitchMode mode, const PipelineOptions& options = {});

// Each utterance labeled `lang` decoded by the decoder for `lang`; the
// reference point for routing with perfect LID.
PipelineReport run_monolingual(const DecoderMap& monolingual, const Manifest& m,
                               const TransliterationTable* table = nullptr, const PipelineOptions& options = {});

}  // namespace mlasr
