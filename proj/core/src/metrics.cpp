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
#include "mlasr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mlasr/error.hpp"
#include "mlasr/parallel.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr {

Tokens tokenize(std::string_view text) { return unicode::split_whitespace(text); }

namespace {

bool is_latin_word(std::string_view w) {
  bool any_letter = false;
  for (char32_t c : unicode::decode(w)) {
    if (!unicode::is_letter(c)) continue;
    if (!unicode::is_latin_script(c)) return false;
    any_letter = true;
  }
  return any_letter;
}

}  // namespace

void TransliterationTable::add(std::string latin_word, std::string native_word) {
  latin_word = unicode::nfc(latin_word);
  native_word = unicode::nfc(native_word);
  if (latin_word.empty() || native_word.empty()) throw DataError("transliteration pair with an empty word");
  if (is_latin_word(latin_word) && is_latin_word(native_word)) {
    throw DataError("transliteration pair relates two Latin words: '" + latin_word + "' / '" + native_word + "'");
  }
  if (latin_word == native_word) return;
  if (links_[latin_word].insert(native_word).second) ++size_;
  links_[native_word].insert(latin_word);
}

bool TransliterationTable::equivalent(std::string_view a, std::string_view b) const {
  if (a == b) return true;
  auto it = links_.find(a);
  return it != links_.end() && it->second.contains(std::string(b));
}

TransliterationTable TransliterationTable::parse(std::string_view tsv, LanguageId native_script,
                                                 std::string_view source_name) {
  TransliterationTable t(std::move(native_script));
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < tsv.size()) {
    std::size_t end = tsv.find('\n', pos);
    if (end == std::string_view::npos) end = tsv.size();
    std::string_view line = tsv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::string loc = std::string(source_name) + ":" + std::to_string(line_no);
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw ParseError(loc + ": expected 'latin_word<TAB>native_word'");
    }
    try {
      t.add(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
    } catch (const Error& e) {
      throw ParseError(loc + ": " + e.what());
    }
  }
  return t;
}

TransliterationTable TransliterationTable::load(const std::filesystem::path& path, LanguageId native_script) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open transliteration table '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), std::move(native_script), path.string());
}

std::size_t Alignment::count(EditOp op) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(ops.begin(), ops.end(), [op](const AlignedPair& p) { return p.op == op; }));
}

Tokens Alignment::replay() const {
  Tokens out;
  for (const auto& p : ops) {
    switch (p.op) {
      case EditOp::kMatch:
      case EditOp::kSubstitution:
      case EditOp::kInsertion:
        out.push_back(p.hyp);
        break;
      case EditOp::kDeletion:
        break;
    }
  }
  return out;
}

namespace {

inline std::size_t sub_cost(const std::string& r, const std::string& h, const TransliterationTable* equiv) {
  if (r == h) return 0;
  return (equiv != nullptr && equiv->equivalent(r, h)) ? 0 : 1;
}

}  // namespace

Alignment align(std::span<const std::string> ref, std::span<const std::string> hyp,
                const TransliterationTable* equiv) {
  // Cells hold (cost, gap ops) packed high/low and compared as one integer.
  // Among minimum-cost alignments the fewest deletions + insertions wins,
  // which pins the sub/del/ins split independently of argument order.
  constexpr std::uint64_t kGap = (std::uint64_t{1} << 32) | 1;
  constexpr std::uint64_t kSub = std::uint64_t{1} << 32;
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<std::uint64_t> d((n + 1) * width);
  for (std::size_t j = 0; j <= m; ++j) d[j] = j * kGap;
  for (std::size_t i = 1; i <= n; ++i) {
    d[i * width] = i * kGap;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint64_t diag = d[(i - 1) * width + j - 1] + sub_cost(ref[i - 1], hyp[j - 1], equiv) * kSub;
      const std::uint64_t del = d[(i - 1) * width + j] + kGap;
      const std::uint64_t ins = d[i * width + j - 1] + kGap;
      d[i * width + j] = std::min({diag, del, ins});
    }
  }

  Alignment a;
  a.cost = static_cast<std::size_t>(d[n * width + m] >> 32);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::uint64_t here = d[i * width + j];
    if (i > 0 && j > 0) {
      const std::size_t c = sub_cost(ref[i - 1], hyp[j - 1], equiv);
      if (here == d[(i - 1) * width + j - 1] + c * kSub) {
        a.ops.push_back({c == 0 ? EditOp::kMatch : EditOp::kSubstitution, ref[i - 1], hyp[j - 1]});
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && here == d[(i - 1) * width + j] + kGap) {
      a.ops.push_back({EditOp::kDeletion, ref[i - 1], {}});
      --i;
      continue;
    }
    a.ops.push_back({EditOp::kInsertion, {}, hyp[j - 1]});
    --j;
  }
  std::reverse(a.ops.begin(), a.ops.end());
  return a;
}

std::size_t edit_distance(std::span<const std::string> ref, std::span<const std::string> hyp,
                          const TransliterationTable* equiv) {
  std::vector<std::size_t> prev(hyp.size() + 1);
  std::vector<std::size_t> cur(hyp.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      cur[j] = std::min({prev[j - 1] + sub_cost(ref[i - 1], hyp[j - 1], equiv), prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[hyp.size()];
}

WerStats stats_from(const Alignment& a, std::size_t n_ref) {
  return {n_ref, a.count(EditOp::kSubstitution), a.count(EditOp::kDeletion), a.count(EditOp::kInsertion)};
}

WerStats wer(std::span<const std::string> ref, std::span<const std::string> hyp) {
  if (ref.empty()) throw DataError("WER is undefined for an empty reference");
  return stats_from(align(ref, hyp), ref.size());
}

WerStats t_wer(std::span<const std::string> ref, std::span<const std::string> hyp, const TransliterationTable& table) {
  if (ref.empty()) throw DataError("T-WER is undefined for an empty reference");
  return stats_from(align(ref, hyp, &table), ref.size());
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = std::fabs(value) * scale;
  // Relative nudge absorbs representation error (23.855 is stored as 23.85499...).
  const double rounded = std::floor(scaled + 0.5 + scaled * 1e-12) / scale;
  return std::copysign(rounded, value);
}

double macro_average(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

namespace {

nlohmann::ordered_json stats_json(const WerStats& s) {
  nlohmann::ordered_json j;
  j["n_ref"] = s.n_ref;
  j["sub"] = s.sub;
  j["del"] = s.del;
  j["ins"] = s.ins;
  j["errors"] = s.errors();
  j["wer"] = round_half_up(s.wer_percent(), 2);
  return j;
}

}  // namespace

std::string CorpusWer::to_json() const {
  nlohmann::ordered_json j;
  j["pooled"] = stats_json(pooled);
  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  for (const auto& [g, s] : by_group) groups[g] = stats_json(s);
  j["by_group"] = groups;
  j["macro_average"] = round_half_up(macro_average, 2);
  return j.dump();
}

CorpusWer corpus_wer(std::span<const ScoredPair> pairs, const TransliterationTable* table, int jobs) {
  for (const auto& p : pairs) {
    if (p.ref.empty()) throw DataError("empty reference in group '" + p.group + "'");
  }
  std::vector<WerStats> per(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    per[i] = stats_from(align(pairs[i].ref, pairs[i].hyp, table), pairs[i].ref.size());
  });
  CorpusWer out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.pooled += per[i];
    out.by_group[pairs[i].group] += per[i];
  }
  std::vector<double> group_wer;
  group_wer.reserve(out.by_group.size());
  for (const auto& [g, s] : out.by_group) group_wer.push_back(s.wer_percent());
  out.macro_average = mlasr::macro_average(group_wer);
  return out;
}

std::string format_wer_line(std::string_view label, const WerStats& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.*s %.2f [ %zu / %zu, %zu ins, %zu del, %zu sub ]", static_cast<int>(label.size()),
                label.data(), round_half_up(s.wer_percent(), 2), s.errors(), s.n_ref, s.ins, s.del, s.sub);
  return buf;
}

}  // namespace mlasr
