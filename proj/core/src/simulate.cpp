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
#include "mlasr/simulate.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "mlasr/decoder.hpp"
#include "mlasr/error.hpp"
#include "mlasr/rng.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr {
namespace {

struct ScriptBlock {
  const char* language;
  char32_t first;
};

// One language per Indic block; the first six mirror the benchmark's
// multilingual track after the Hindi/Marathi merger.
constexpr ScriptBlock kBlocks[] = {
    {"hindmara", 0x0900}, {"odia", 0x0B00},    {"tamil", 0x0B80},   {"telugu", 0x0C00},    {"gujarati", 0x0A80},
    {"bengali", 0x0980},  {"punjabi", 0x0A00}, {"kannada", 0x0C80}, {"malayalam", 0x0D00},
};

}  // namespace

std::size_t max_simulated_languages() { return std::size(kBlocks); }

std::vector<std::pair<LanguageId, std::u32string>> simulation_alphabets(std::size_t languages) {
  if (languages == 0 || languages > max_simulated_languages()) {
    throw DataError("simulated language count must be in [1, " + std::to_string(max_simulated_languages()) + "]");
  }
  std::vector<std::pair<LanguageId, std::u32string>> out;
  for (std::size_t i = 0; i < languages; ++i) {
    std::u32string letters;
    for (char32_t c = kBlocks[i].first; c < kBlocks[i].first + 0x80; ++c) {
      if (unicode::is_letter(c) && unicode::is_normalization_inert(c)) letters.push_back(c);
    }
    out.emplace_back(LanguageId(kBlocks[i].language), std::move(letters));
  }
  return out;
}

Manifest generate_corpus(const CorpusSpec& spec) {
  if (spec.utterances_per_language == 0) throw DataError("utterances_per_language must be at least 1");
  if (spec.text_length == 0) throw DataError("text_length must be at least 1");
  std::vector<Utterance> entries;
  entries.reserve(spec.languages * spec.utterances_per_language);
  char idbuf[64];
  for (const auto& [lang, alphabet] : simulation_alphabets(spec.languages)) {
    for (std::size_t i = 0; i < spec.utterances_per_language; ++i) {
      std::snprintf(idbuf, sizeof idbuf, "%s_%05zu", lang.str().c_str(), i);
      Rng rng(derive_seed(spec.seed, idbuf));
      std::u32string text;
      std::size_t chars = 0;
      while (chars < spec.text_length) {
        if (!text.empty()) text.push_back(U' ');
        const std::size_t len = 2 + rng.below(6);
        for (std::size_t k = 0; k < len; ++k) text.push_back(alphabet[rng.below(alphabet.size())]);
        chars += len;
      }
      Utterance u;
      u.utt_id = idbuf;
      u.text = unicode::encode(text);
      u.language = lang;
      u.duration_s = 0.08 * static_cast<double>(chars);
      entries.push_back(std::move(u));
    }
  }
  return Manifest(std::move(entries));
}

void SimulationConfig::validate() const {
  auto rate = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
  if (!rate(common_cer)) throw DataError("common_cer must be in [0, 1]");
  if (!rate(mono_cer)) throw DataError("mono_cer must be in [0, 1]");
  if (!rate(cross_script_rate)) throw DataError("cross_script_rate must be in [0, 1]");
  for (const auto& [id, v] : mono_cer_by_language) {
    if (!rate(v)) throw DataError("mono_cer for '" + id.str() + "' must be in [0, 1]");
  }
  if (corpus.languages == 0 || corpus.languages > max_simulated_languages()) {
    throw DataError("languages must be in [1, " + std::to_string(max_simulated_languages()) + "]");
  }
  if (corpus.utterances_per_language == 0) throw DataError("utterances per language must be at least 1");
  if (corpus.text_length == 0) throw DataError("text length must be at least 1");
}

std::string SimulationConfig::to_json() const {
  nlohmann::ordered_json j;
  j["languages"] = corpus.languages;
  j["utterances_per_language"] = corpus.utterances_per_language;
  j["text_length"] = corpus.text_length;
  j["corpus_seed"] = corpus.seed;
  j["common_cer"] = common_cer;
  j["mono_cer"] = mono_cer;
  nlohmann::ordered_json by = nlohmann::ordered_json::object();
  for (const auto& [id, v] : mono_cer_by_language) by[id.str()] = v;
  j["mono_cer_by_language"] = by;
  j["cross_script_rate"] = cross_script_rate;
  j["seed"] = seed;
  return j.dump();
}

std::string SimulationResult::to_json() const {
  using ojson = nlohmann::ordered_json;
  ojson j;
  j["config"] = ojson::parse(config.to_json());
  auto aggregates = [](const PipelineReport& r) {
    ojson a = ojson::parse(r.to_json())["aggregates"];
    return a;
  };
  j["m1"] = aggregates(m1);
  j["m2"] = aggregates(m2);
  const double m1_macro = m1.wer.macro_average;
  const double m2_macro = m2.wer.macro_average;
  ojson cmp;
  cmp["m1_macro_wer"] = round_half_up(m1_macro, 2);
  cmp["m2_macro_wer"] = round_half_up(m2_macro, 2);
  cmp["relative_improvement_percent"] = m1_macro > 0 ? round_half_up(100.0 * (m1_macro - m2_macro) / m1_macro, 2) : 0.0;
  cmp["m2_beats_m1"] = m2_macro < m1_macro;
  cmp["lid_accuracy"] = m2.lid ? m2.lid->accuracy() : 0.0;
  j["comparison"] = cmp;
  return j.dump(2);
}

SimulationResult simulate(const SimulationConfig& config) {
  config.validate();
  const Manifest corpus = generate_corpus(config.corpus);
  const auto alphabets = simulation_alphabets(config.corpus.languages);

  std::map<LanguageId, std::u32string> pools;
  std::vector<Vocab> vocabs;
  for (const auto& [lang, alphabet] : alphabets) {
    pools.emplace(lang, alphabet);
    vocabs.push_back(build_vocab(corpus, lang));
  }
  const VocabRegistry reg(std::move(vocabs));

  SyntheticDecoderConfig common_cfg;
  common_cfg.char_error_rate = config.common_cer;
  common_cfg.pools = pools;
  common_cfg.cross_script_rate = config.cross_script_rate;
  common_cfg.seed = derive_seed(config.seed, "common");
  const SyntheticDecoder common(common_cfg);

  std::vector<SyntheticDecoder> mono;
  mono.reserve(alphabets.size());
  for (const auto& [lang, alphabet] : alphabets) {
    SyntheticDecoderConfig cfg;
    auto it = config.mono_cer_by_language.find(lang);
    cfg.char_error_rate = it == config.mono_cer_by_language.end() ? config.mono_cer : it->second;
    cfg.pools = pools;
    cfg.script_lock = lang;
    cfg.seed = derive_seed(config.seed, "mono:" + lang.str());
    mono.emplace_back(std::move(cfg));
  }
  DecoderMap mono_map;
  for (std::size_t i = 0; i < alphabets.size(); ++i) mono_map.emplace(alphabets[i].first, &mono[i]);

  PipelineOptions options;
  options.jobs = config.jobs;
  SimulationResult result;
  result.config = config;
  result.m1 = run_m1(common, corpus, nullptr, options);
  result.m2 = run_m2(common, mono_map, reg, LidPolicy::for_registry(reg), corpus, nullptr, options);
  return result;
}

}  // namespace mlasr
