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
#include "mlasr/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mlasr/error.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr {

using nlohmann::json;

LanguageId::LanguageId(std::string id) : id_(std::move(id)) {
  if (!is_valid(id_)) throw DataError("invalid language id '" + id_ + "' (expected [a-z0-9_-]+)");
}

bool LanguageId::is_valid(std::string_view id) noexcept {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

Manifest::Manifest(std::vector<Utterance> entries, std::map<std::string, std::string> metadata)
    : entries_(std::move(entries)), metadata_(std::move(metadata)) {
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Utterance& a, const Utterance& b) { return a.utt_id < b.utt_id; });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].utt_id == entries_[i - 1].utt_id) {
      throw DataError("duplicate utt_id '" + entries_[i].utt_id + "'");
    }
  }
}

const Utterance* Manifest::find(std::string_view utt_id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), utt_id,
                             [](const Utterance& u, std::string_view id) { return u.utt_id < id; });
  if (it == entries_.end() || it->utt_id != utt_id) return nullptr;
  return &*it;
}

Manifest Manifest::transformed(const std::function<void(Utterance&)>& fn) const {
  std::vector<Utterance> out = entries_;
  for (auto& u : out) fn(u);
  return Manifest(std::move(out), metadata_);
}

namespace {

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::string_view loc) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ParseError(std::string(loc) + ": field '" + key + "' must be a string or null");
  return it->get<std::string>();
}

Utterance parse_utterance(const json& obj, std::string_view loc) {
  Utterance u;
  auto id = obj.find("utt_id");
  if (id == obj.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw ParseError(std::string(loc) + ": missing or empty string field 'utt_id'");
  }
  u.utt_id = id->get<std::string>();
  auto text = obj.find("text");
  if (text == obj.end() || !text->is_string()) {
    throw ParseError(std::string(loc) + ": missing string field 'text'");
  }
  try {
    u.text = unicode::nfc(text->get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(std::string(loc) + ": " + e.what());
  }
  u.audio_path = optional_string(obj, "audio", loc);
  if (auto lang = optional_string(obj, "language", loc)) {
    if (!LanguageId::is_valid(*lang)) throw ParseError(std::string(loc) + ": invalid language id '" + *lang + "'");
    u.language = LanguageId(*lang);
  }
  auto dur = obj.find("duration_s");
  if (dur != obj.end() && !dur->is_null()) {
    if (!dur->is_number()) throw ParseError(std::string(loc) + ": field 'duration_s' must be a number or null");
    const double d = dur->get<double>();
    if (!(d >= 0.0)) throw ParseError(std::string(loc) + ": negative duration_s");
    u.duration_s = d;
  }
  u.split = optional_string(obj, "split", loc);
  return u;
}

nlohmann::ordered_json to_json(const Utterance& u) {
  using json = nlohmann::ordered_json;
  json j = json::object();
  j["utt_id"] = u.utt_id;
  j["audio"] = u.audio_path ? json(*u.audio_path) : json(nullptr);
  j["text"] = u.text;
  j["language"] = u.language ? json(u.language->str()) : json(nullptr);
  j["duration_s"] = u.duration_s ? json(*u.duration_s) : json(nullptr);
  if (u.split) j["split"] = *u.split;
  return j;
}

}  // namespace

Manifest parse_manifest(std::string_view jsonl, std::string_view source_name) {
  std::vector<Utterance> entries;
  std::map<std::string, std::string> metadata;
  std::map<std::string, std::size_t> first_seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::string loc = where(source_name, line_no);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(loc + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) throw ParseError(loc + ": expected a JSON object");
    if (obj.contains("metadata") && !obj.contains("utt_id")) {
      const json& md = obj["metadata"];
      if (!md.is_object()) throw ParseError(loc + ": 'metadata' must be an object");
      for (const auto& [k, v] : md.items()) {
        if (!v.is_string()) throw ParseError(loc + ": metadata value for '" + k + "' must be a string");
        metadata[k] = v.get<std::string>();
      }
      continue;
    }
    Utterance u = parse_utterance(obj, loc);
    auto [it, inserted] = first_seen.emplace(u.utt_id, line_no);
    if (!inserted) {
      throw DataError(loc + ": duplicate utt_id '" + u.utt_id + "' (first seen at line " +
                      std::to_string(it->second) + ")");
    }
    entries.push_back(std::move(u));
  }
  return Manifest(std::move(entries), std::move(metadata));
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.string());
}

std::string serialize_manifest(const Manifest& m) {
  std::string out;
  if (!m.metadata().empty()) {
    json md = json::object();
    for (const auto& [k, v] : m.metadata()) md[k] = v;
    out += json{{"metadata", md}}.dump();
    out += '\n';
  }
  for (const auto& u : m.entries()) {
    out += to_json(u).dump();
    out += '\n';
  }
  return out;
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest '" + path.string() + "'");
  out << serialize_manifest(m);
  if (!out) throw IoError("failed writing manifest '" + path.string() + "'");
}

std::map<std::string, LanguageStats> manifest_stats(const Manifest& m) {
  std::map<std::string, LanguageStats> stats;
  for (const auto& u : m.entries()) {
    auto& s = stats[u.language ? u.language->str() : std::string(kUnknownLanguage)];
    ++s.count;
    if (u.duration_s) s.total_duration_hrs += *u.duration_s / 3600.0;
  }
  return stats;
}

}  // namespace mlasr
