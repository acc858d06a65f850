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
#include "mlasr/lid.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "mlasr/error.hpp"
#include "mlasr/parallel.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr {

LidPolicy LidPolicy::for_registry(const VocabRegistry& reg) {
  LidPolicy p;
  p.tie_break_order = reg.languages();
  if (!p.tie_break_order.empty()) p.fallback = p.tie_break_order.front();
  return p;
}

void LidPolicy::validate(const VocabRegistry& reg) const {
  std::set<LanguageId> seen;
  for (const auto& id : tie_break_order) {
    if (!reg.contains(id)) throw DataError("tie_break_order names unknown language '" + id.str() + "'");
    if (!seen.insert(id).second) throw DataError("tie_break_order lists '" + id.str() + "' twice");
  }
  if (seen.size() != reg.vocabs().size()) {
    throw DataError("tie_break_order must cover all " + std::to_string(reg.vocabs().size()) + " registry languages");
  }
  if (!reg.contains(fallback)) throw DataError("fallback language '" + fallback.str() + "' is not in the registry");
}

LidPolicy LidPolicy::from_json(std::string_view text, const VocabRegistry& reg) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("LID policy: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("LID policy: expected a JSON object");
  LidPolicy p = for_registry(reg);
  try {
    if (j.contains("ignore_shared")) p.ignore_shared = j.at("ignore_shared").get<bool>();
    if (j.contains("min_votes")) p.min_votes = j.at("min_votes").get<std::size_t>();
    if (j.contains("fallback")) p.fallback = LanguageId(j.at("fallback").get<std::string>());
    if (j.contains("tie_break_order")) {
      p.tie_break_order.clear();
      for (const auto& id : j.at("tie_break_order")) p.tie_break_order.emplace_back(id.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("LID policy: ") + e.what());
  }
  p.validate(reg);
  return p;
}

std::string LidPolicy::to_json() const {
  nlohmann::ordered_json j;
  j["ignore_shared"] = ignore_shared;
  auto order = nlohmann::ordered_json::array();
  for (const auto& id : tie_break_order) order.push_back(id.str());
  j["tie_break_order"] = order;
  j["fallback"] = fallback.str();
  j["min_votes"] = min_votes;
  return j.dump();
}

std::vector<LanguageId> classify_char(char32_t c, const VocabRegistry& reg) {
  auto owners = reg.owners(c);
  return {owners.begin(), owners.end()};
}

LidResult identify_language(std::string_view text, const VocabRegistry& reg, const LidPolicy& policy) {
  LidResult r;
  for (char32_t c : unicode::decode(text)) {
    if (unicode::is_whitespace(c)) continue;
    auto owners = reg.owners(c);
    if (owners.empty()) continue;
    if (owners.size() > 1 && policy.ignore_shared) continue;
    for (const auto& id : owners) ++r.votes[id];
    ++r.total_voting_chars;
  }

  std::size_t best = 0;
  for (const auto& [id, n] : r.votes) best = std::max(best, n);

  if (r.total_voting_chars < policy.min_votes || best == 0) {
    r.predicted = policy.fallback;
    r.used_fallback = true;
  } else {
    std::size_t leaders = 0;
    for (const auto& [id, n] : r.votes) leaders += (n == best);
    r.tie = leaders > 1;
    // First language in tie-break order holding the maximum.
    bool found = false;
    for (const auto& id : policy.tie_break_order) {
      auto it = r.votes.find(id);
      if (it != r.votes.end() && it->second == best) {
        r.predicted = id;
        found = true;
        break;
      }
    }
    if (!found) {
      // Policy not covering the registry; fall back to id order.
      for (const auto& [id, n] : r.votes) {
        if (n == best) {
          r.predicted = id;
          break;
        }
      }
    }
  }
  if (r.total_voting_chars > 0) {
    auto it = r.votes.find(r.predicted);
    const std::size_t mine = it == r.votes.end() ? 0 : it->second;
    r.confidence = static_cast<double>(mine) / static_cast<double>(r.total_voting_chars);
  }
  return r;
}

void ConfusionMatrix::add(const LanguageId& gold, const LanguageId& predicted) {
  ++counts[gold][predicted];
  ++total;
  if (gold == predicted) ++correct;
}

std::string ConfusionMatrix::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [gold, row] : counts) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (const auto& [pred, n] : row) r[pred.str()] = n;
    m[gold.str()] = r;
  }
  j["confusion"] = m;
  j["total"] = total;
  j["correct"] = correct;
  j["accuracy"] = accuracy();
  return j.dump();
}

BatchLidResult batch_identify(const Manifest& m, const VocabRegistry& reg, const LidPolicy& policy, int jobs) {
  const auto& entries = m.entries();
  std::vector<LidResult> results(entries.size());
  parallel_for(entries.size(), jobs,
               [&](std::size_t i) { results[i] = identify_language(entries[i].text, reg, policy); });

  BatchLidResult out;
  out.labels.reserve(entries.size());
  std::vector<Utterance> labeled = entries;
  ConfusionMatrix cm;
  bool any_gold = false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].language) {
      any_gold = true;
      cm.add(*entries[i].language, results[i].predicted);
    }
    labeled[i].language = results[i].predicted;
    out.labels.push_back({entries[i].utt_id, entries[i].language, std::move(results[i])});
  }
  out.labeled = Manifest(std::move(labeled), m.metadata());
  if (any_gold) out.confusion = std::move(cm);
  return out;
}

std::string format_lid_tsv(const std::vector<LidLabel>& labels) {
  std::string out;
  char buf[32];
  for (const auto& l : labels) {
    std::snprintf(buf, sizeof buf, "%.4f", l.result.confidence);
    out += l.utt_id + '\t' + l.result.predicted.str() + '\t' + buf + '\t' + (l.result.tie ? "true" : "false") + '\n';
  }
  return out;
}

}  // namespace mlasr
