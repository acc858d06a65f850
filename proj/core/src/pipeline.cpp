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
#include "mlasr/pipeline.hpp"

#include <cstdio>

#include <json.hpp>

#include "mlasr/error.hpp"
#include "mlasr/parallel.hpp"

namespace mlasr {
namespace {

using ojson = nlohmann::ordered_json;

struct Decoded {
  std::string raw;
  std::optional<std::string> rescored;
};

Decoded run_decoder(const Decoder& d, const Utterance& u, const PipelineOptions& opt) {
  Decoded out;
  if (opt.lm == nullptr) {
    out.raw = d.decode(u);
    return out;
  }
  const auto list = d.nbest(u);
  if (list.empty()) throw DataError("decoder returned an empty n-best list for '" + u.utt_id + "'");
  out.raw = list.front().text;
  std::vector<lm::Hypothesis> hyps;
  hyps.reserve(list.size());
  for (const auto& e : list) hyps.push_back({u.utt_id, e.text, e.score});
  out.rescored = lm::rescore_nbest(hyps, *opt.lm, opt.rescore).hypothesis.text;
  return out;
}

std::string group_of(const Utterance& u) { return u.language ? u.language->str() : std::string(kUnknownLanguage); }

void score_row(UtteranceRow& row, const Utterance& u, const Decoded& d, const TransliterationTable* table) {
  const Tokens ref = tokenize(u.text);
  if (ref.empty()) throw DataError("utterance '" + u.utt_id + "' has an empty reference");
  row.utt_id = u.utt_id;
  row.gold = u.language;
  row.group = group_of(u);
  row.ref = u.text;
  row.hyp = d.raw;
  row.wer = stats_from(align(ref, tokenize(d.raw)), ref.size());
  if (table) row.t_wer = stats_from(align(ref, tokenize(d.raw), table), ref.size());
  if (d.rescored) {
    row.hyp_lm = *d.rescored;
    row.wer_lm = stats_from(align(ref, tokenize(*d.rescored)), ref.size());
    if (table) row.t_wer_lm = stats_from(align(ref, tokenize(*d.rescored), table), ref.size());
  }
}

template <typename Get>
std::optional<CorpusWer> summarize(const std::vector<UtteranceRow>& rows, Get get) {
  CorpusWer out;
  bool any = false;
  for (const auto& r : rows) {
    const std::optional<WerStats>& s = get(r);
    if (!s) continue;
    any = true;
    out.pooled += *s;
    out.by_group[r.group] += *s;
  }
  if (!any) return std::nullopt;
  std::vector<double> values;
  for (const auto& [g, s] : out.by_group) values.push_back(s.wer_percent());
  out.macro_average = macro_average(values);
  return out;
}

ojson stats_json(const WerStats& s) {
  ojson j;
  j["n_ref"] = s.n_ref;
  j["sub"] = s.sub;
  j["del"] = s.del;
  j["ins"] = s.ins;
  j["wer"] = round_half_up(s.wer_percent(), 2);
  return j;
}

void check_has_text(const Manifest& m) {
  for (const auto& u : m.entries()) {
    if (tokenize(u.text).empty()) throw DataError("utterance '" + u.utt_id + "' has an empty reference");
  }
}

}  // namespace

void PipelineReport::finalize() {
  wer = summarize(rows, [](const UtteranceRow& r) { return std::optional<WerStats>(r.wer); }).value_or(CorpusWer{});
  t_wer = summarize(rows, [](const UtteranceRow& r) { return r.t_wer; });
  wer_lm = summarize(rows, [](const UtteranceRow& r) { return r.wer_lm; });
  t_wer_lm = summarize(rows, [](const UtteranceRow& r) { return r.t_wer_lm; });
  ConfusionMatrix cm;
  for (const auto& r : rows) {
    if (r.gold && r.predicted) cm.add(*r.gold, *r.predicted);
  }
  if (cm.total > 0) {
    lid = std::move(cm);
  } else {
    lid.reset();
  }
}

std::string PipelineReport::to_json() const {
  ojson j;
  j["system"] = system;
  ojson agg;
  agg["wer"] = ojson::parse(wer.to_json());
  if (t_wer) agg["t_wer"] = ojson::parse(t_wer->to_json());
  if (wer_lm) agg["wer_lm"] = ojson::parse(wer_lm->to_json());
  if (t_wer_lm) agg["t_wer_lm"] = ojson::parse(t_wer_lm->to_json());
  if (lid) agg["lid"] = ojson::parse(lid->to_json());
  j["aggregates"] = agg;
  ojson rs = ojson::array();
  for (const auto& r : rows) {
    ojson o;
    o["utt_id"] = r.utt_id;
    o["group"] = r.group;
    o["gold"] = r.gold ? ojson(r.gold->str()) : ojson(nullptr);
    o["predicted"] = r.predicted ? ojson(r.predicted->str()) : ojson(nullptr);
    if (r.predicted) {
      o["lid_confidence"] = r.lid_confidence;
      o["lid_tie"] = r.lid_tie;
      o["lid_fallback"] = r.lid_fallback;
    }
    o["ref"] = r.ref;
    o["hyp"] = r.hyp;
    o["wer"] = stats_json(r.wer);
    if (r.t_wer) o["t_wer"] = stats_json(*r.t_wer);
    if (r.hyp_lm) o["hyp_lm"] = *r.hyp_lm;
    if (r.wer_lm) o["wer_lm"] = stats_json(*r.wer_lm);
    if (r.t_wer_lm) o["t_wer_lm"] = stats_json(*r.t_wer_lm);
    rs.push_back(std::move(o));
  }
  j["rows"] = std::move(rs);
  return j.dump(2);
}

std::string PipelineReport::to_table() const {
  std::vector<std::pair<std::string, const CorpusWer*>> cols{{"WER", &wer}};
  if (t_wer) cols.emplace_back("T-WER", &*t_wer);
  if (wer_lm) cols.emplace_back("WER+LM", &*wer_lm);
  if (t_wer_lm) cols.emplace_back("T-WER+LM", &*t_wer_lm);
  char buf[64];
  std::string out = "System " + system + "\n";
  std::snprintf(buf, sizeof buf, "%-20s", "Language");
  out += buf;
  for (const auto& [name, c] : cols) {
    std::snprintf(buf, sizeof buf, " %10s", name.c_str());
    out += buf;
  }
  out += '\n';
  for (const auto& [group, s] : wer.by_group) {
    std::snprintf(buf, sizeof buf, "%-20s", group.c_str());
    out += buf;
    for (const auto& [name, c] : cols) {
      auto it = c->by_group.find(group);
      std::snprintf(buf, sizeof buf, " %10.2f", it == c->by_group.end() ? 0.0 : round_half_up(it->second.wer_percent(), 2));
      out += buf;
    }
    out += '\n';
  }
  std::snprintf(buf, sizeof buf, "%-20s", "Average");
  out += buf;
  for (const auto& [name, c] : cols) {
    std::snprintf(buf, sizeof buf, " %10.2f", round_half_up(c->macro_average, 2));
    out += buf;
  }
  out += '\n';
  if (lid) {
    std::snprintf(buf, sizeof buf, "LID accuracy %.4f (%zu/%zu)\n", lid->accuracy(), lid->correct, lid->total);
    out += buf;
  }
  return out;
}

PipelineReport run_m1(const Decoder& common, const Manifest& m, const TransliterationTable* table,
                      const PipelineOptions& options) {
  check_has_text(m);
  const auto& entries = m.entries();
  PipelineReport report;
  report.system = "m1";
  report.rows.resize(entries.size());
  parallel_for(entries.size(), options.jobs, [&](std::size_t i) {
    score_row(report.rows[i], entries[i], run_decoder(common, entries[i], options), table);
  });
  report.finalize();
  return report;
}

PipelineReport run_m2(const Decoder& common, const DecoderMap& monolingual, const VocabRegistry& reg,
                      const LidPolicy& policy, const Manifest& m, const TransliterationTable* table,
                      const PipelineOptions& options) {
  policy.validate(reg);
  for (const auto& id : reg.languages()) {
    auto it = monolingual.find(id);
    if (it == monolingual.end() || it->second == nullptr) {
      throw DataError("no monolingual decoder for registry language '" + id.str() + "'");
    }
  }
  check_has_text(m);
  const auto& entries = m.entries();
  PipelineReport report;
  report.system = "m2";
  report.rows.resize(entries.size());
  parallel_for(entries.size(), options.jobs, [&](std::size_t i) {
    const Utterance& u = entries[i];
    const Decoded first = run_decoder(common, u, options);
    const std::string& lid_input =
        (options.lid_source == LidSource::kRescored && first.rescored) ? *first.rescored : first.raw;
    const LidResult lid = identify_language(lid_input, reg, policy);
    LanguageId route = lid.predicted;
    if (options.oracle_lid) {
      if (!u.language) throw DataError("oracle LID needs a gold label on '" + u.utt_id + "'");
      route = *u.language;
    }
    auto it = monolingual.find(route);
    if (it == monolingual.end() || it->second == nullptr) {
      throw DataError("no monolingual decoder for predicted language '" + route.str() + "'");
    }
    UtteranceRow& row = report.rows[i];
    score_row(row, u, run_decoder(*it->second, u, options), table);
    row.predicted = lid.predicted;  // what LID said, even when routing by gold
    row.lid_confidence = lid.confidence;
    row.lid_tie = lid.tie;
    row.lid_fallback = lid.used_fallback;
  });
  report.finalize();
  return report;
}

PipelineReport run_monolingual(const DecoderMap& monolingual, const Manifest& m, const TransliterationTable* table,
                               const PipelineOptions& options) {
  check_has_text(m);
  const auto& entries = m.entries();
  PipelineReport report;
  report.system = "mono";
  report.rows.resize(entries.size());
  parallel_for(entries.size(), options.jobs, [&](std::size_t i) {
    const Utterance& u = entries[i];
    if (!u.language) throw DataError("utterance '" + u.utt_id + "' has no language label");
    auto it = monolingual.find(*u.language);
    if (it == monolingual.end() || it->second == nullptr) {
      throw DataError("no monolingual decoder for '" + u.language->str() + "'");
    }
    score_row(report.rows[i], u, run_decoder(*it->second, u, options), table);
    report.rows[i].predicted = u.language;
  });
  report.finalize();
  return report;
}

PipelineReport run_codeswitch(const DecoderMap& decoders, const Manifest& m, const TransliterationTable& table,
                              CodeSwitchMode mode, const PipelineOptions& options) {
  if (decoders.empty()) throw DataError("code-switch evaluation needs at least one decoder");
  if (mode == CodeSwitchMode::kC1 && decoders.size() != 1) {
    throw DataError("C1 uses one common decoder; got " + std::to_string(decoders.size()));
  }
  for (const auto& [id, d] : decoders) {
    if (d == nullptr) throw DataError("null decoder for '" + id.str() + "'");
  }
  check_has_text(m);
  const auto& entries = m.entries();
  PipelineReport report;
  report.system = mode == CodeSwitchMode::kC1 ? "c1" : "c2";
  report.rows.resize(entries.size());
  parallel_for(entries.size(), options.jobs, [&](std::size_t i) {
    const Utterance& u = entries[i];
    if (!u.language) throw DataError("utterance '" + u.utt_id + "' has no pair label");
    const Decoder* d = decoders.begin()->second;
    if (mode == CodeSwitchMode::kC2) {
      auto it = decoders.find(*u.language);
      if (it == decoders.end()) throw DataError("unknown pair label '" + u.language->str() + "' on '" + u.utt_id + "'");
      d = it->second;
    }
    score_row(report.rows[i], u, run_decoder(*d, u, options), &table);
  });
  report.finalize();
  return report;
}

}  // namespace mlasr
