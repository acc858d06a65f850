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
#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "mlasr/error.hpp"
#include "mlasr/rng.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr::testing {

namespace fs = std::filesystem;

TempDir::TempDir(std::string_view tag) {
  // Only the directory name is random; test data never is.
  std::random_device rd;
  const std::uint64_t salt = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  path_ = fs::temp_directory_path() / ("mlasr_" + std::string(tag) + "_" + std::to_string(salt));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& p, std::string_view content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

audio::AudioBuffer sine(double freq_hz, double amplitude, int rate_hz, std::size_t n, double phase) {
  audio::AudioBuffer b;
  b.sample_rate_hz = rate_hz;
  b.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / rate_hz + phase);
  }
  return b;
}

Utterance utt(std::string id, std::string text, std::string lang) {
  Utterance u;
  u.utt_id = std::move(id);
  u.text = std::move(text);
  if (!lang.empty()) u.language = LanguageId(std::move(lang));
  return u;
}

VocabRegistry registry_from(const Manifest& m) {
  std::set<LanguageId> langs;
  for (const auto& u : m.entries()) {
    if (u.language) langs.insert(*u.language);
  }
  std::vector<Vocab> vs;
  for (const auto& l : langs) vs.push_back(build_vocab(m, l));
  return VocabRegistry(std::move(vs));
}

Manifest corrupt_cross_script(const Manifest& m, const VocabRegistry& reg, double rate, std::uint64_t seed) {
  std::map<LanguageId, std::u32string> pools;
  for (const auto& [id, v] : reg.vocabs()) pools[id] = std::u32string(v.chars.begin(), v.chars.end());
  return m.transformed([&](Utterance& u) {
    Rng rng(derive_seed(seed, u.utt_id));
    std::vector<const std::u32string*> others;
    for (const auto& [id, pool] : pools) {
      if (!u.language || id != *u.language) others.push_back(&pool);
    }
    std::u32string s = unicode::decode(u.text);
    for (char32_t& c : s) {
      if (unicode::is_whitespace(c)) continue;
      if (rng.uniform() < rate) {
        const auto& pool = *others[rng.below(others.size())];
        c = pool[rng.below(pool.size())];
      }
    }
    u.text = unicode::encode(s);
  });
}

std::vector<ScoredPair> pairs_with_rates(const std::string& group, double wer_percent, double t_wer_percent) {
  const auto errors = static_cast<std::size_t>(std::lround(wer_percent * 100.0));
  const std::size_t translit =
      t_wer_percent < 0 ? 0 : errors - static_cast<std::size_t>(std::lround(t_wer_percent * 100.0));
  std::vector<ScoredPair> out;
  std::size_t placed = 0;
  for (std::size_t u = 0; u < 100; ++u) {
    ScoredPair p;
    p.group = group;
    const std::size_t here = errors / 100 + (u < errors % 100 ? 1 : 0);
    for (std::size_t t = 0; t < 100; ++t) {
      if (t < here) {
        if (placed < translit) {
          p.ref.push_back("train");
          p.hyp.push_back("ट्रेन");
        } else {
          p.ref.push_back("w" + std::to_string(t));
          p.hyp.push_back("x");
        }
        ++placed;
      } else {
        p.ref.push_back("w" + std::to_string(t));
        p.hyp.push_back(p.ref.back());
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

const TransliterationTable& train_table() {
  static const TransliterationTable t = [] {
    TransliterationTable x;
    x.add("train", "ट्रेन");
    return x;
  }();
  return t;
}

}  // namespace mlasr::testing
