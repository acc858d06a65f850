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
#include "mlasr/vocab.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mlasr/error.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr {

Vocab build_vocab(const Manifest& m, const LanguageId& lang) {
  Vocab v;
  v.language = lang;
  for (const auto& u : m.entries()) {
    if (u.language == lang) v.freq.add(u.text);
  }
  for (const auto& [c, n] : v.freq.counts) v.chars.insert(c);
  if (v.chars.empty()) throw DataError("vocab for '" + lang.str() + "' would be empty");
  return v;
}

Vocab vocab_union(std::span<const Vocab> vocabs, const LanguageId& name) {
  if (vocabs.empty()) throw DataError("vocab_union needs at least one vocab");
  Vocab out;
  out.language = name;
  for (const auto& v : vocabs) {
    out.chars.insert(v.chars.begin(), v.chars.end());
    out.freq.merge(v.freq);
  }
  return out;
}

VocabDiff vocab_diff(const Vocab& a, const Vocab& b) {
  VocabDiff d;
  std::set_difference(a.chars.begin(), a.chars.end(), b.chars.begin(), b.chars.end(),
                      std::inserter(d.only_a, d.only_a.end()));
  std::set_difference(b.chars.begin(), b.chars.end(), a.chars.begin(), a.chars.end(),
                      std::inserter(d.only_b, d.only_b.end()));
  std::set_intersection(a.chars.begin(), a.chars.end(), b.chars.begin(), b.chars.end(),
                        std::inserter(d.shared, d.shared.end()));
  return d;
}

VocabRegistry::VocabRegistry(std::vector<Vocab> vocabs, std::map<LanguageId, LanguageId> relabel)
    : relabel_(std::move(relabel)) {
  for (auto& v : vocabs) {
    const LanguageId id = v.language;
    if (id.empty()) throw DataError("vocab without a language id");
    if (!vocabs_.emplace(id, std::move(v)).second) {
      throw DataError("duplicate vocab for language '" + id.str() + "'");
    }
  }
  for (const auto& [id, v] : vocabs_) {
    for (char32_t c : v.chars) owners_[c].push_back(id);
  }
  for (const auto& [c, ids] : owners_) {
    if (ids.size() >= 2) shared_.insert(c);
  }
}

std::vector<LanguageId> VocabRegistry::languages() const {
  std::vector<LanguageId> ids;
  ids.reserve(vocabs_.size());
  for (const auto& [id, v] : vocabs_) ids.push_back(id);
  return ids;
}

const Vocab& VocabRegistry::at(const LanguageId& id) const {
  auto it = vocabs_.find(id);
  if (it == vocabs_.end()) throw DataError("unknown language '" + id.str() + "'");
  return it->second;
}

std::span<const LanguageId> VocabRegistry::owners(char32_t c) const {
  auto it = owners_.find(c);
  if (it == owners_.end()) return {};
  return it->second;
}

Manifest VocabRegistry::relabel(const Manifest& m) const {
  if (relabel_.empty()) return m;
  return m.transformed([&](Utterance& u) {
    if (!u.language) return;
    if (auto it = relabel_.find(*u.language); it != relabel_.end()) u.language = it->second;
  });
}

VocabRegistry VocabRegistry::with(Vocab v) const {
  std::vector<Vocab> all;
  for (const auto& [id, existing] : vocabs_) {
    if (id != v.language) all.push_back(existing);
  }
  all.push_back(std::move(v));
  return VocabRegistry(std::move(all), relabel_);
}

std::vector<MergeCandidate> propose_mergers(const VocabRegistry& reg, std::size_t max_sym_diff) {
  std::vector<MergeCandidate> out;
  const auto& vs = reg.vocabs();
  for (auto i = vs.begin(); i != vs.end(); ++i) {
    for (auto j = std::next(i); j != vs.end(); ++j) {
      const std::size_t size = vocab_diff(i->second, j->second).symmetric_size();
      if (size <= max_sym_diff) out.push_back({i->first, j->first, size});
    }
  }
  std::sort(out.begin(), out.end(), [](const MergeCandidate& x, const MergeCandidate& y) {
    return std::tie(x.sym_diff, x.a, x.b) < std::tie(y.sym_diff, y.a, y.b);
  });
  return out;
}

VocabRegistry merge_languages(const VocabRegistry& reg, const LanguageId& a, const LanguageId& b,
                              const LanguageId& merged) {
  if (a == b) throw DataError("cannot merge language '" + a.str() + "' with itself");
  const Vocab& va = reg.at(a);
  const Vocab& vb = reg.at(b);
  if (merged != a && merged != b && reg.contains(merged)) {
    throw DataError("merged id '" + merged.str() + "' names an existing language");
  }
  const Vocab pair[] = {va, vb};
  Vocab u = vocab_union(pair, merged);

  std::vector<Vocab> rest;
  for (const auto& [id, v] : reg.vocabs()) {
    if (id != a && id != b) rest.push_back(v);
  }
  rest.push_back(std::move(u));

  std::map<LanguageId, LanguageId> relabel = reg.relabel_map();
  // Earlier merges into a or b now point at the new id.
  for (auto& [from, to] : relabel) {
    if (to == a || to == b) to = merged;
  }
  if (a != merged) relabel[a] = merged;
  if (b != merged) relabel[b] = merged;
  return VocabRegistry(std::move(rest), std::move(relabel));
}

void check_cleaning_rules(const CleaningRules& rules, const VocabRegistry& reg) {
  for (const auto& [id, v] : reg.vocabs()) {
    for (char32_t c : rules.removal_set) {
      if (v.contains(c)) {
        throw DataError("removal set contains " + unicode::codepoint_label(c) + " ('" + unicode::encode(c) +
                        "'), which the '" + id.str() + "' vocab declares");
      }
    }
  }
}

std::string serialize_vocab(const Vocab& v) {
  std::string out = "#lang " + v.language.str() + "\n";
  for (char32_t c : v.chars) {
    out += unicode::encode(c);
    out += '\t';
    out += std::to_string(v.freq[c]);
    out += '\n';
  }
  return out;
}

Vocab parse_vocab(std::string_view text, std::string_view source_name) {
  Vocab v;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  char32_t prev = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const std::string loc = std::string(source_name) + ":" + std::to_string(line_no);
    if (!have_header) {
      constexpr std::string_view kHeader = "#lang ";
      if (line.substr(0, kHeader.size()) != kHeader) throw ParseError(loc + ": expected '#lang <id>' header");
      const std::string id(line.substr(kHeader.size()));
      if (!LanguageId::is_valid(id)) throw ParseError(loc + ": invalid language id '" + id + "'");
      v.language = LanguageId(id);
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(loc + ": expected '<char>\\t<count>'");
    const std::u32string ch = unicode::decode(line.substr(0, tab));
    if (ch.size() != 1) throw ParseError(loc + ": expected exactly one character before the tab");
    const char32_t c = ch[0];
    if (unicode::is_whitespace(c)) throw ParseError(loc + ": whitespace is not a vocab character");
    if (!v.chars.empty() && c <= prev) throw ParseError(loc + ": characters must be sorted by codepoint and unique");
    std::uint64_t count = 0;
    const std::string_view num = line.substr(tab + 1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), count);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
      throw ParseError(loc + ": invalid count '" + std::string(num) + "'");
    }
    v.chars.insert(c);
    if (count > 0) v.freq.counts[c] = count;
    prev = c;
  }
  if (!have_header) throw ParseError(std::string(source_name) + ": empty vocab file");
  return v;
}

void write_vocab(const Vocab& v, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write vocab '" + path.string() + "'");
  out << serialize_vocab(v);
}

Vocab load_vocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocab '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_vocab(ss.str(), path.string());
}

}  // namespace mlasr
