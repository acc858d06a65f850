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
#include "mlasr/textnorm.hpp"

#include <algorithm>

#include <json.hpp>

#include "mlasr/error.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr {

using nlohmann::json;

std::uint64_t CharFrequency::total() const noexcept {
  std::uint64_t t = 0;
  for (const auto& [c, n] : counts) t += n;
  return t;
}

std::uint64_t CharFrequency::operator[](char32_t c) const noexcept {
  auto it = counts.find(c);
  return it == counts.end() ? 0 : it->second;
}

void CharFrequency::add(std::string_view text) {
  for (char32_t c : unicode::decode(text)) {
    if (!unicode::is_whitespace(c)) ++counts[c];
  }
}

void CharFrequency::merge(const CharFrequency& other) {
  for (const auto& [c, n] : other.counts) counts[c] += n;
}

CharFrequency char_frequency(std::span<const std::string> texts) {
  CharFrequency f;
  for (const auto& t : texts) f.add(t);
  return f;
}

CleaningRules CleaningRules::defaults() {
  static const std::set<char32_t> kDefaultPunctuation = [] {
    std::set<char32_t> s;
    for (char32_t c = 0; c <= 0x10FFFF; ++c) {
      if (c == 0xD800) c = 0xE000;
      if (unicode::is_punctuation(c)) s.insert(c);
    }
    // apostrophe, hyphen-minus, hyphen, non-breaking hyphen
    for (char32_t keep : {U'\'', U'-', U'‐', U'‑'}) s.erase(keep);
    return s;
  }();
  CleaningRules r;
  r.removal_set = kDefaultPunctuation;
  return r;
}

CleaningRules CleaningRules::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("cleaning rules: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("cleaning rules: expected a JSON object");
  CleaningRules r = defaults();
  if (auto it = j.find("removal_set"); it != j.end()) {
    if (it->is_string() && it->get<std::string>() == "default") {
      // keep defaults
    } else if (it->is_array()) {
      r.removal_set.clear();
      for (const auto& item : *it) {
        if (!item.is_string()) throw ParseError("cleaning rules: removal_set items must be strings");
        for (char32_t c : unicode::decode(item.get<std::string>())) r.removal_set.insert(c);
      }
    } else {
      throw ParseError("cleaning rules: removal_set must be \"default\" or an array of strings");
    }
  }
  if (auto it = j.find("collapse_whitespace"); it != j.end()) {
    if (!it->is_boolean()) throw ParseError("cleaning rules: collapse_whitespace must be a boolean");
    r.collapse_whitespace = it->get<bool>();
  }
  if (auto it = j.find("lowercase_latin"); it != j.end()) {
    if (!it->is_boolean()) throw ParseError("cleaning rules: lowercase_latin must be a boolean");
    r.lowercase_latin = it->get<bool>();
  }
  return r;
}

std::string CleaningRules::to_json() const {
  nlohmann::ordered_json j;
  if (removal_set == defaults().removal_set) {
    j["removal_set"] = "default";
  } else {
    auto arr = nlohmann::ordered_json::array();
    for (char32_t c : removal_set) arr.push_back(unicode::encode(c));
    j["removal_set"] = arr;
  }
  j["collapse_whitespace"] = collapse_whitespace;
  j["lowercase_latin"] = lowercase_latin;
  return j.dump();
}

namespace {

// Single pass shared by clean_text and the rare-symbol filter.
template <typename Drop>
std::string rebuild(std::string_view text, Drop&& drop, bool collapse, bool lowercase_latin) {
  std::u32string out;
  std::u32string pending_ws;
  bool started = false;
  for (char32_t c : unicode::decode(unicode::nfc(text))) {
    if (drop(c)) continue;
    if (unicode::is_whitespace(c)) {
      if (started) pending_ws.push_back(c);
      continue;
    }
    if (!pending_ws.empty()) {
      if (collapse) {
        out.push_back(U' ');
      } else {
        out += pending_ws;
      }
      pending_ws.clear();
    }
    if (lowercase_latin && unicode::is_latin_script(c)) c = unicode::to_lower(c);
    out.push_back(c);
    started = true;
  }
  // Deleting a character can leave a composable sequence behind.
  return unicode::nfc(unicode::encode(out));
}

}  // namespace

std::string clean_text(std::string_view text, const CleaningRules& rules) {
  return rebuild(
      text, [&](char32_t c) { return rules.removal_set.contains(c); }, rules.collapse_whitespace,
      rules.lowercase_latin);
}

Manifest clean_manifest(const Manifest& m, const CleaningRules& rules) {
  return m.transformed([&](Utterance& u) { u.text = clean_text(u.text, rules); });
}

namespace {

// One counting + deletion round. Returns the characters removed.
std::map<char32_t, std::uint64_t> filter_round(Manifest& m, std::uint64_t threshold) {
  const bool has_split = std::any_of(m.entries().begin(), m.entries().end(),
                                     [](const Utterance& u) { return u.split.has_value(); });
  CharFrequency freq;
  std::set<char32_t> seen;
  for (const auto& u : m.entries()) {
    for (char32_t c : unicode::decode(u.text)) {
      if (!unicode::is_whitespace(c)) seen.insert(c);
    }
    if (!has_split || u.split == "train") freq.add(u.text);
  }

  std::map<char32_t, std::uint64_t> removed;
  for (char32_t c : seen) {
    const std::uint64_t n = freq[c];
    if (n < threshold) removed.emplace(c, n);
  }
  if (removed.empty()) return removed;

  auto drop = [&](char32_t c) { return removed.contains(c); };
  m = m.transformed([&](Utterance& u) {
    const std::u32string scalars = unicode::decode(u.text);
    if (std::none_of(scalars.begin(), scalars.end(), drop)) return;
    u.text = rebuild(u.text, drop, /*collapse=*/true, /*lowercase_latin=*/false);
  });
  return removed;
}

}  // namespace

RareSymbolResult rare_symbol_filter(const Manifest& m, std::uint64_t threshold) {
  RareSymbolResult result{m, {}};
  // Recomposition after a deletion can mint a new, rare character; repeat
  // until nothing is removed so the output is a fixed point.
  for (;;) {
    auto removed = filter_round(result.manifest, threshold);
    if (removed.empty()) break;
    result.removed.merge(removed);
  }
  return result;
}

std::string format_removed_report(const std::map<char32_t, std::uint64_t>& removed) {
  std::string out;
  for (const auto& [c, n] : removed) {
    out += unicode::encode(c);
    out += '\t';
    out += std::to_string(n);
    out += '\n';
  }
  return out;
}

}  // namespace mlasr
