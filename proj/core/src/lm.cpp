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
#include "mlasr/lm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "mlasr/error.hpp"
#include "mlasr/metrics.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr::lm {

std::vector<std::string> clean_lm_corpus(std::span<const std::string> texts, const Vocab& vocab) {
  std::vector<std::string> out;
  for (const auto& line : texts) {
    std::string kept;
    for (const auto& word : tokenize(line)) {
      const std::u32string scalars = unicode::decode(word);
      const bool ok = std::all_of(scalars.begin(), scalars.end(), [&](char32_t c) { return vocab.contains(c); });
      if (!ok) continue;
      if (!kept.empty()) kept += ' ';
      kept += word;
    }
    if (!kept.empty()) out.push_back(std::move(kept));
  }
  return out;
}

bool Lexicon::contains(std::string_view w) const {
  return std::any_of(words.begin(), words.end(), [&](const auto& e) { return e.first == w; });
}

std::string Lexicon::serialize() const {
  std::string out;
  for (const auto& [w, n] : words) out += w + '\t' + std::to_string(n) + '\n';
  return out;
}

Lexicon Lexicon::parse(std::string_view tsv, std::string_view source_name) {
  Lexicon lex;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < tsv.size()) {
    std::size_t end = tsv.find('\n', pos);
    if (end == std::string_view::npos) end = tsv.size();
    std::string_view line = tsv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string loc = std::string(source_name) + ":" + std::to_string(line_no);
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) throw ParseError(loc + ": expected 'word<TAB>frequency'");
    std::uint64_t n = 0;
    const std::string_view num = line.substr(tab + 1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
      throw ParseError(loc + ": invalid frequency '" + std::string(num) + "'");
    }
    std::string word(line.substr(0, tab));
    if (!seen.insert(word).second) throw ParseError(loc + ": duplicate word '" + word + "'");
    lex.words.emplace_back(std::move(word), n);
  }
  return lex;
}

Lexicon build_lexicon(std::span<const std::string> texts, std::size_t k) {
  if (k == 0) throw DataError("lexicon size must be at least 1");
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& line : texts) {
    for (auto& w : tokenize(line)) ++freq[std::move(w)];
  }
  Lexicon lex;
  lex.words.assign(freq.begin(), freq.end());
  auto by_rank = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  if (lex.words.size() > k) {
    std::partial_sort(lex.words.begin(), lex.words.begin() + static_cast<std::ptrdiff_t>(k), lex.words.end(), by_rank);
    lex.words.resize(k);
  } else {
    std::sort(lex.words.begin(), lex.words.end(), by_rank);
  }
  return lex;
}

// ---- NGramModel -------------------------------------------------------------

WordId NGramModel::intern(std::string_view w) {
  auto it = ids_.find(std::string(w));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<WordId>(words_.size());
  words_.emplace_back(w);
  ids_.emplace(words_.back(), id);
  return id;
}

std::optional<WordId> NGramModel::id(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

WordId NGramModel::id_or_unk(std::string_view word) const {
  auto found = id(word);
  return found ? *found : unk_;
}

std::vector<std::string> NGramModel::predictable_words() const {
  std::vector<std::string> out;
  for (const auto& [g, e] : tables_.at(0)) {
    if (g[0] != bos_) out.push_back(words_[g[0]]);
  }
  return out;
}

double NGramModel::logprob_ids(std::span<const WordId> context, WordId word) const {
  const std::size_t max_ctx = static_cast<std::size_t>(order_ - 1);
  if (context.size() > max_ctx) context = context.subspan(context.size() - max_ctx);
  double backoff = 0.0;
  NGram key;
  for (std::size_t len = context.size();; --len) {
    key.assign(context.end() - static_cast<std::ptrdiff_t>(len), context.end());
    key.push_back(word);
    const auto& tbl = tables_[len];
    if (auto it = tbl.find(key); it != tbl.end()) return backoff + it->second.logprob;
    if (len == 0) break;
    key.pop_back();
    const auto& ctx_tbl = tables_[len - 1];
    if (auto it = ctx_tbl.find(key); it != ctx_tbl.end()) backoff += it->second.backoff;
  }
  return backoff + unk_logprob();
}

double NGramModel::logprob(std::span<const std::string> context, std::string_view word) const {
  std::vector<WordId> ids;
  ids.reserve(context.size());
  for (const auto& w : context) ids.push_back(id_or_unk(w));
  return logprob_ids(ids, id_or_unk(word));
}

double NGramModel::score(std::span<const std::string> tokens) const {
  std::vector<WordId> ids;
  ids.reserve(tokens.size() + 2);
  ids.push_back(bos_);
  for (const auto& t : tokens) ids.push_back(id_or_unk(t));
  ids.push_back(eos_);
  double total = 0.0;
  std::span<const WordId> all(ids);
  for (std::size_t i = 1; i < ids.size(); ++i) total += logprob_ids(all.subspan(0, i), ids[i]);
  return total;
}

double NGramModel::unk_logprob() const {
  const auto& uni = tables_.at(0);
  auto it = uni.find(NGram{unk_});
  return it == uni.end() ? kBosLogProb : it->second.logprob;
}

std::size_t NGramModel::ngram_count(int n) const { return table(n).size(); }

const std::map<NGram, NGramModel::Entry>& NGramModel::table(int n) const {
  if (n < 1 || n > order_) throw DataError("no " + std::to_string(n) + "-gram table in an order-" + std::to_string(order_) + " model");
  return tables_[static_cast<std::size_t>(n - 1)];
}

std::string NGramModel::render(const NGram& g) const {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ' ';
    out += words_.at(g[i]);
  }
  return out;
}

std::vector<NGram> NGramModel::contexts() const {
  std::vector<NGram> out{NGram{}};
  for (int n = 1; n < order_; ++n) {
    for (const auto& [g, e] : tables_[static_cast<std::size_t>(n - 1)]) out.push_back(g);
  }
  return out;
}

std::uint64_t NGramModel::count(std::span<const std::string> ngram) const {
  if (raw_counts_.empty() || ngram.empty() || ngram.size() > static_cast<std::size_t>(order_)) return 0;
  NGram key;
  for (const auto& w : ngram) {
    auto found = id(w);
    if (!found) return 0;
    key.push_back(*found);
  }
  const auto& tbl = raw_counts_[ngram.size() - 1];
  auto it = tbl.find(key);
  return it == tbl.end() ? 0 : it->second;
}

void NGramModel::estimate(std::span<const std::uint64_t> min_counts) {
  const auto N = static_cast<std::size_t>(order_);
  auto keep = [&](const NGram& g) {
    const std::size_t n = g.size();
    return n == 1 || raw_counts_[n - 1].at(g) >= min_counts[n - 1];
  };

  // Kneser-Ney counts: raw counts at the top order and for n-grams opening
  // with "<s>" (which have no left context), continuation counts elsewhere.
  std::vector<std::map<NGram, std::uint64_t>> kn(N);
  kn[N - 1] = raw_counts_[N - 1];
  for (std::size_t n = 1; n < N; ++n) {
    auto& dst = kn[n - 1];
    for (const auto& [g, c] : raw_counts_[n - 1]) dst[g] = g[0] == bos_ ? c : 0;
    for (const auto& [g, c] : raw_counts_[n]) {
      NGram suffix(g.begin() + 1, g.end());
      if (suffix[0] != bos_) ++dst[suffix];
    }
  }

  tables_.assign(N, {});

  // Unigrams: discounted counts interpolated with a uniform distribution
  // over every predictable word, so unseen lexicon words and "<unk>" keep
  // non-zero mass.
  {
    std::uint64_t total = 0;
    std::size_t seen = 0;
    std::size_t vocab_size = 0;
    for (WordId w = 0; w < words_.size(); ++w) {
      if (w == bos_) continue;
      ++vocab_size;
      auto it = kn[0].find(NGram{w});
      const std::uint64_t c = it == kn[0].end() ? 0 : it->second;
      total += c;
      seen += c > 0;
    }
    const double td = static_cast<double>(total);
    const double gamma = kDiscount * static_cast<double>(seen) / td;
    const double uniform = 1.0 / static_cast<double>(vocab_size);
    for (WordId w = 0; w < words_.size(); ++w) {
      if (w == bos_) {
        tables_[0][NGram{w}] = {kBosLogProb, 0.0};
        continue;
      }
      auto it = kn[0].find(NGram{w});
      const double c = it == kn[0].end() ? 0.0 : static_cast<double>(it->second);
      const double p = std::max(c - kDiscount, 0.0) / td + gamma * uniform;
      tables_[0][NGram{w}] = {std::log10(p), 0.0};
    }
  }

  for (std::size_t n = 2; n <= N; ++n) {
    const auto& counts = kn[n - 1];
    auto it = counts.begin();
    while (it != counts.end()) {
      // Entries sharing a context are contiguous in key order.
      const NGram context(it->first.begin(), it->first.end() - 1);
      auto group_end = it;
      std::uint64_t context_total = 0;
      std::uint64_t pruned_mass = 0;
      std::size_t kept = 0;
      while (group_end != counts.end() && std::equal(context.begin(), context.end(), group_end->first.begin())) {
        context_total += group_end->second;
        if (keep(group_end->first)) {
          ++kept;
        } else {
          pruned_mass += group_end->second;
        }
        ++group_end;
      }
      if (kept > 0) {
        const double ct = static_cast<double>(context_total);
        const double gamma = (kDiscount * static_cast<double>(kept) + static_cast<double>(pruned_mass)) / ct;
        const std::span<const WordId> lower_ctx(context.data() + 1, context.size() - 1);
        for (auto g = it; g != group_end; ++g) {
          if (!keep(g->first)) continue;
          const WordId w = g->first.back();
          const double lower = std::pow(10.0, logprob_ids(lower_ctx, w));
          const double p = (static_cast<double>(g->second) - kDiscount) / ct + gamma * lower;
          tables_[n - 1][g->first] = {std::log10(p), 0.0};
        }
        tables_[n - 2].at(context).backoff = std::log10(gamma);
      }
      it = group_end;
    }
  }
}

NGramModel train_ngram(std::span<const std::string> texts, int order, const Lexicon& lexicon) {
  if (order < 1 || order > kMaxOrder) {
    throw DataError("n-gram order must be in [1, " + std::to_string(kMaxOrder) + "], got " + std::to_string(order));
  }
  NGramModel model;
  model.order_ = order;
  model.bos_ = model.intern(kBos);
  model.eos_ = model.intern(kEos);
  model.unk_ = model.intern(kUnk);
  for (const auto& [w, n] : lexicon.words) model.intern(w);

  const auto N = static_cast<std::size_t>(order);
  model.raw_counts_.assign(N, {});
  std::size_t sentences = 0;
  std::vector<WordId> ids;
  for (const auto& line : texts) {
    const Tokens toks = tokenize(line);
    if (toks.empty()) continue;
    ++sentences;
    ids.assign(1, model.bos_);
    for (const auto& t : toks) ids.push_back(model.id_or_unk(t));
    ids.push_back(model.eos_);
    for (std::size_t n = 1; n <= N; ++n) {
      auto& tbl = model.raw_counts_[n - 1];
      for (std::size_t i = 0; i + n <= ids.size(); ++i) ++tbl[NGram(ids.begin() + i, ids.begin() + i + n)];
    }
  }
  if (sentences == 0) throw DataError("cannot train an n-gram model on an empty corpus");
  const std::vector<std::uint64_t> ones(N, 1);
  model.estimate(ones);
  return model;
}

NGramModel prune_ngram(const NGramModel& model, std::span<const std::uint64_t> min_counts) {
  if (!model.has_counts()) throw DataError("pruning needs a model with counts (train it, not load it from ARPA)");
  if (min_counts.size() != static_cast<std::size_t>(model.order())) {
    throw DataError("expected " + std::to_string(model.order()) + " pruning thresholds, got " +
                    std::to_string(min_counts.size()));
  }
  if (min_counts[0] > 1) throw DataError("unigrams are never pruned; a unigram threshold above 1 would empty order 1");
  for (std::size_t i = 2; i < min_counts.size(); ++i) {
    if (min_counts[i] < min_counts[i - 1]) throw DataError("pruning thresholds must be non-decreasing across orders");
  }
  NGramModel out = model;
  out.estimate(min_counts);
  return out;
}

// ---- ARPA -------------------------------------------------------------------

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

double parse_number(std::string_view s, const std::string& loc) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(loc + ": invalid number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string NGramModel::to_arpa() const {
  std::string out = "\\data\\\n";
  for (int n = 1; n <= order_; ++n) out += "ngram " + std::to_string(n) + "=" + std::to_string(ngram_count(n)) + "\n";
  for (int n = 1; n <= order_; ++n) {
    out += "\n\\" + std::to_string(n) + "-grams:\n";
    for (const auto& [g, e] : tables_[static_cast<std::size_t>(n - 1)]) {
      append_number(out, e.logprob);
      out += '\t';
      out += render(g);
      if (n < order_ && e.backoff != 0.0) {
        out += '\t';
        append_number(out, e.backoff);
      }
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  return out;
}

NGramModel NGramModel::from_arpa(std::string_view text, std::string_view source_name) {
  NGramModel model;
  std::vector<std::size_t> declared;
  enum class State { kPreamble, kData, kSection, kDone } state = State::kPreamble;
  std::size_t section = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string loc = std::string(source_name) + ":" + std::to_string(line_no);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    if (line == "\\end\\") {
      state = State::kDone;
      break;
    }
    if (line == "\\data\\") {
      if (state != State::kPreamble) throw ParseError(loc + ": unexpected \\data\\");
      state = State::kData;
      continue;
    }
    if (state == State::kPreamble) continue;
    if (line.size() > 1 && line.front() == '\\') {
      const std::size_t dash = line.find("-grams:");
      if (dash == std::string_view::npos) throw ParseError(loc + ": unknown section '" + std::string(line) + "'");
      const auto n = static_cast<std::size_t>(parse_number(line.substr(1, dash - 1), loc));
      if (n != section + 1 || n > declared.size()) throw ParseError(loc + ": sections out of order");
      section = n;
      state = State::kSection;
      continue;
    }
    if (state == State::kData) {
      constexpr std::string_view kNgram = "ngram ";
      if (line.substr(0, kNgram.size()) != kNgram) throw ParseError(loc + ": expected 'ngram N=count'");
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(loc + ": expected 'ngram N=count'");
      const auto n = static_cast<std::size_t>(parse_number(line.substr(kNgram.size(), eq - kNgram.size()), loc));
      if (n != declared.size() + 1) throw ParseError(loc + ": ngram counts out of order");
      declared.push_back(static_cast<std::size_t>(parse_number(line.substr(eq + 1), loc)));
      continue;
    }
    if (state != State::kSection) throw ParseError(loc + ": unexpected line");

    const auto fields = split_fields(line);
    if (fields.size() != section + 1 && fields.size() != section + 2) {
      throw ParseError(loc + ": expected logprob, " + std::to_string(section) + " words, optional backoff");
    }
    if (model.tables_.empty()) {
      model.order_ = static_cast<int>(declared.size());
      if (model.order_ < 1) throw ParseError(loc + ": no n-gram counts declared");
      model.tables_.assign(declared.size(), {});
    }
    Entry e;
    e.logprob = parse_number(fields[0], loc);
    if (fields.size() == section + 2) e.backoff = parse_number(fields.back(), loc);
    NGram g;
    for (std::size_t k = 1; k <= section; ++k) {
      if (section == 1) {
        g.push_back(model.intern(fields[k]));
      } else {
        auto found = model.id(fields[k]);
        if (!found) throw ParseError(loc + ": word '" + std::string(fields[k]) + "' missing from the unigram section");
        g.push_back(*found);
      }
    }
    if (!model.tables_[section - 1].emplace(std::move(g), e).second) throw ParseError(loc + ": duplicate n-gram");
  }
  if (state != State::kDone) throw ParseError(std::string(source_name) + ": missing \\end\\");
  if (model.tables_.empty()) throw ParseError(std::string(source_name) + ": no n-grams");
  for (std::size_t n = 0; n < declared.size(); ++n) {
    if (model.tables_[n].size() != declared[n]) {
      throw ParseError(std::string(source_name) + ": declared " + std::to_string(declared[n]) + " " +
                       std::to_string(n + 1) + "-grams, found " + std::to_string(model.tables_[n].size()));
    }
  }
  auto bos = model.id(kBos);
  auto eos = model.id(kEos);
  if (!bos || !eos) throw ParseError(std::string(source_name) + ": model lacks <s> or </s>");
  model.bos_ = *bos;
  model.eos_ = *eos;
  if (auto unk = model.id(kUnk)) {
    model.unk_ = *unk;
  } else {
    model.unk_ = model.intern(kUnk);
    model.tables_[0][NGram{model.unk_}] = {kBosLogProb, 0.0};
  }
  return model;
}

void NGramModel::write_arpa(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write ARPA '" + path.string() + "'");
  out << to_arpa();
}

NGramModel NGramModel::load_arpa(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open ARPA '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_arpa(ss.str(), path.string());
}

double perplexity(const NGramModel& model, std::span<const std::vector<std::string>> sentences) {
  double total = 0.0;
  std::size_t tokens = 0;
  for (const auto& s : sentences) {
    total += model.score(s);
    tokens += s.size() + 1;
  }
  if (tokens == 0) throw DataError("perplexity of an empty sentence set");
  return std::pow(10.0, -total / static_cast<double>(tokens));
}

// ---- rescoring --------------------------------------------------------------

Rescored rescore_nbest(std::span<const Hypothesis> hyps, const NGramModel& model, const RescoreConfig& config) {
  if (hyps.empty()) throw DataError("rescore_nbest needs at least one hypothesis");
  if (config.beam == 0) throw DataError("beam must be at least 1");
  std::vector<std::size_t> order(hyps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return hyps[a].acoustic_score > hyps[b].acoustic_score; });
  if (order.size() > config.beam) order.resize(config.beam);

  Rescored best;
  bool have = false;
  for (std::size_t idx : order) {
    const Tokens toks = tokenize(hyps[idx].text);
    const double lm = model.score(toks);
    const double total = hyps[idx].acoustic_score + config.alpha * lm + config.beta * static_cast<double>(toks.size());
    if (!have || total > best.total_score || (total == best.total_score && idx < best.index)) {
      best = {hyps[idx], idx, lm, total};
      have = true;
    }
  }
  return best;
}

}  // namespace mlasr::lm
