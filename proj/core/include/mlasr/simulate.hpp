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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mlasr/corpus.hpp"
#include "mlasr/pipeline.hpp"
#include "mlasr/vocab.hpp"

namespace mlasr {

// Disjoint per-language alphabets taken from Indic script blocks (letters
// that are stable under normalization). At most max_simulated_languages().
std::vector<std::pair<LanguageId, std::u32string>> simulation_alphabets(std::size_t languages);
std::size_t max_simulated_languages();

struct CorpusSpec {
  std::size_t languages = 6;
  std::size_t utterances_per_language = 200;
  // Minimum non-whitespace characters per utterance.
  std::size_t text_length = 60;
  std::uint64_t seed = 7;
};

// Labeled corpus of random words over each language's alphabet.
Manifest generate_corpus(const CorpusSpec& spec);

struct SimulationConfig {
  CorpusSpec corpus{};
  double common_cer = 0.10;
  double mono_cer = 0.05;
  // Per-language override of mono_cer.
  std::map<LanguageId, double> mono_cer_by_language;
  double cross_script_rate = 0.3;
  std::uint64_t seed = 7;
  int jobs = 1;

  void validate() const;
  std::string to_json() const;
};

struct SimulationResult {
  SimulationConfig config;
  PipelineReport m1;
  PipelineReport m2;

  std::string to_json() const;
};

// Generates a corpus, then evaluates a common noisy decoder (M1) against
// LID-routed monolingual noisy decoders (M2). Deterministic in the config.
SimulationResult simulate(const SimulationConfig& config);

}  // namespace mlasr
