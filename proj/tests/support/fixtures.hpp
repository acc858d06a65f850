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
#include <string>
#include <string_view>
#include <vector>

#include "mlasr/audioprep.hpp"
#include "mlasr/corpus.hpp"
#include "mlasr/metrics.hpp"
#include "mlasr/vocab.hpp"

namespace mlasr::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& p, std::string_view content);
std::string read_text(const std::filesystem::path& p);

audio::AudioBuffer sine(double freq_hz, double amplitude, int rate_hz, std::size_t n, double phase = 0.0);

Utterance utt(std::string id, std::string text, std::string lang = {});

// Registry with one vocab per language, read off the given manifest.
VocabRegistry registry_from(const Manifest& m);

// Replaces each non-space character, with probability rate, by a uniformly
// drawn letter of a different language's alphabet.
Manifest corrupt_cross_script(const Manifest& m, const VocabRegistry& reg, double rate, std::uint64_t seed);

// 100 utterances of 100 tokens whose pooled WER is exactly wer_percent (two
// decimals). When t_wer_percent is given, enough substitutions are
// transliteration pairs from train_table() to bring T-WER down to it.
std::vector<ScoredPair> pairs_with_rates(const std::string& group, double wer_percent,
                                         double t_wer_percent = -1.0);

// {train <-> ट्रेन}
const TransliterationTable& train_table();

}  // namespace mlasr::testing
