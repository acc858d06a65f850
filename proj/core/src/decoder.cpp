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
#include "mlasr/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mlasr/error.hpp"
#include "mlasr/rng.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr {

std::vector<NBestEntry> Decoder::nbest(const Utterance& utt) const { return {{decode(utt), 0.0}}; }

ReplayDecoder::ReplayDecoder(std::unordered_map<std::string, std::vector<NBestEntry>> table)
    : table_(std::move(table)) {
  for (auto& [id, list] : table_) {
    if (list.empty()) throw DataError("replay entry '" + id + "' has an empty n-best list");
    // Best first; equal scores keep file order.
    std::stable_sort(list.begin(), list.end(), [](const NBestEntry& a, const NBestEntry& b) { return a.score > b.score; });
  }
}

ReplayDecoder ReplayDecoder::parse(std::string_view content, std::string_view source_name) {
  using nlohmann::json;
  const std::size_t first = content.find_first_not_of(" \t\r\n");
  const bool jsonl = first != std::string_view::npos && content[first] == '{';
  std::unordered_map<std::string, std::vector<NBestEntry>> table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::string loc = std::string(source_name) + ":" + std::to_string(line_no);

    std::string id;
    std::vector<NBestEntry> list;
    if (jsonl) {
      try {
        const json j = json::parse(line);
        id = j.at("utt_id").get<std::string>();
        if (j.contains("nbest")) {
          for (const auto& e : j.at("nbest")) {
            list.push_back({unicode::nfc(e.at("text").get<std::string>()), e.value("score", 0.0)});
          }
        } else {
          list.push_back({unicode::nfc(j.at("text").get<std::string>()), j.value("score", 0.0)});
        }
      } catch (const json::exception& e) {
        throw ParseError(loc + ": " + e.what());
      }
    } else {
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) {
        // An id with no hypothesis is an empty transcript.
        id = std::string(line);
        list.push_back({"", 0.0});
      } else {
        id = std::string(line.substr(0, tab));
        list.push_back({unicode::nfc(line.substr(tab + 1)), 0.0});
      }
    }
    if (id.empty()) throw ParseError(loc + ": empty utt_id");
    if (!table.emplace(id, std::move(list)).second) throw ParseError(loc + ": duplicate utt_id '" + id + "'");
  }
  return ReplayDecoder(std::move(table));
}

ReplayDecoder ReplayDecoder::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open hypothesis file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

ReplayDecoder ReplayDecoder::echo(const Manifest& m) {
  std::unordered_map<std::string, std::vector<NBestEntry>> table;
  for (const auto& u : m.entries()) table[u.utt_id] = {{u.text, 0.0}};
  return ReplayDecoder(std::move(table));
}

const std::vector<NBestEntry>& ReplayDecoder::lookup(const std::string& utt_id) const {
  auto it = table_.find(utt_id);
  if (it == table_.end()) throw DataError("replay decoder has no hypothesis for '" + utt_id + "'");
  return it->second;
}

std::string ReplayDecoder::decode(const Utterance& utt) const { return lookup(utt.utt_id).front().text; }

std::vector<NBestEntry> ReplayDecoder::nbest(const Utterance& utt) const { return lookup(utt.utt_id); }

void SyntheticDecoderConfig::validate() const {
  auto prob = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
  if (!prob(char_error_rate)) throw DataError("char_error_rate must be in [0, 1]");
  if (!prob(cross_script_rate)) throw DataError("cross_script_rate must be in [0, 1]");
  if (!prob(p_sub) || !prob(p_del) || !prob(p_ins) || std::fabs(p_sub + p_del + p_ins - 1.0) > 1e-9) {
    throw DataError("error mix (sub, del, ins) must be probabilities summing to 1");
  }
  if (pools.empty() && default_pool.empty()) throw DataError("synthetic decoder needs at least one character pool");
  for (const auto& [id, pool] : pools) {
    if (pool.empty()) throw DataError("empty character pool for '" + id.str() + "'");
  }
  if (script_lock && !pools.contains(*script_lock)) {
    throw DataError("script_lock language '" + script_lock->str() + "' has no character pool");
  }
}

SyntheticDecoder::SyntheticDecoder(SyntheticDecoderConfig config) : config_(std::move(config)) {
  config_.validate();
  for (const auto& [id, pool] : config_.pools) pool_order_.push_back(id);
}

const std::u32string& SyntheticDecoder::pool_for(const std::optional<LanguageId>& lang) const {
  if (lang) {
    if (auto it = config_.pools.find(*lang); it != config_.pools.end()) return it->second;
  }
  if (!config_.default_pool.empty()) return config_.default_pool;
  return config_.pools.begin()->second;
}

std::string SyntheticDecoder::decode(const Utterance& utt) const {
  Rng rng(derive_seed(config_.seed, utt.utt_id));
  const std::u32string ref = unicode::decode(utt.text);
  std::u32string out;
  out.reserve(ref.size() + ref.size() / 4);

  if (config_.script_lock && utt.language != config_.script_lock) {
    const std::u32string& pool = config_.pools.at(*config_.script_lock);
    for (char32_t c : ref) out.push_back(unicode::is_whitespace(c) ? c : pool[rng.below(pool.size())]);
    return unicode::nfc(unicode::encode(out));
  }

  const std::u32string& own = pool_for(utt.language);
  auto draw = [&]() -> char32_t {
    if (config_.cross_script_rate > 0.0 && pool_order_.size() > 1 && rng.uniform() < config_.cross_script_rate) {
      std::vector<const std::u32string*> others;
      for (const auto& id : pool_order_) {
        if (id != utt.language) others.push_back(&config_.pools.at(id));
      }
      const std::u32string& p = *others[rng.below(others.size())];
      return p[rng.below(p.size())];
    }
    return own[rng.below(own.size())];
  };

  for (char32_t c : ref) {
    if (unicode::is_whitespace(c) || !(rng.uniform() < config_.char_error_rate)) {
      out.push_back(c);
      continue;
    }
    const double kind = rng.uniform();
    if (kind < config_.p_sub) {
      char32_t r = draw();
      // A substitution must change the character.
      for (int tries = 0; r == c && tries < 8; ++tries) r = draw();
      out.push_back(r);
    } else if (kind < config_.p_sub + config_.p_del) {
      // deletion
    } else {
      out.push_back(c);
      out.push_back(draw());
    }
  }
  return unicode::nfc(unicode::encode(out));
}

}  // namespace mlasr
