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
#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "mlasr/error.hpp"
#include "mlasr/lid.hpp"
#include "mlasr/rng.hpp"
#include "mlasr/simulate.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr {
namespace {

using testing::utt;

Vocab make(std::string lang, std::u32string chars) {
  Vocab v;
  v.language = LanguageId(std::move(lang));
  for (char32_t c : chars) {
    v.chars.insert(c);
    v.freq.counts[c] += 1;
  }
  return v;
}

// Devanagari, Tamil, Telugu, Odia letters plus digits shared by two vocabs.
VocabRegistry indic() {
  return VocabRegistry({make("hindmara", U"नमस्तेकखग12"), make("tamil", U"கசடதப12"), make("telugu", U"కచటత"),
                        make("odia", U"କଖଗଘ")});
}

TEST(ClassifyChar, Examples) {
  const auto reg = indic();
  EXPECT_EQ(classify_char(U'न', reg), std::vector<LanguageId>{LanguageId("hindmara")});
  EXPECT_TRUE(classify_char(U'z', reg).empty());
  EXPECT_EQ(classify_char(U'1', reg), (std::vector<LanguageId>{LanguageId("hindmara"), LanguageId("tamil")}));
}

TEST(IdentifyLanguage, Namaste) {
  const auto reg = indic();
  const std::string text = unicode::nfc("नमस्ते");
  // Brute count: every scalar of the word is owned by exactly one vocab.
  std::size_t owned = 0;
  for (char32_t c : unicode::decode(text)) owned += reg.owners(c).size() == 1;
  ASSERT_EQ(owned, 6u);
  const auto r = identify_language(text, reg, LidPolicy::for_registry(reg));
  EXPECT_EQ(r.predicted, LanguageId("hindmara"));
  EXPECT_DOUBLE_EQ(r.confidence, 1.0);
  EXPECT_EQ(r.total_voting_chars, 6u);
  EXPECT_FALSE(r.tie);
  EXPECT_FALSE(r.used_fallback);
}

TEST(IdentifyLanguage, MajorityAndTie) {
  const auto reg = indic();
  const auto policy = LidPolicy::for_registry(reg);
  const auto r = identify_language("கசட క", reg, policy);
  EXPECT_EQ(r.predicted, LanguageId("tamil"));
  EXPECT_EQ(r.votes, (std::map<LanguageId, std::size_t>{{LanguageId("tamil"), 3}, {LanguageId("telugu"), 1}}));
  EXPECT_DOUBLE_EQ(r.confidence, 0.75);

  LidPolicy p = policy;
  p.tie_break_order = {LanguageId("odia"), LanguageId("tamil"), LanguageId("hindmara"), LanguageId("telugu")};
  const auto t = identify_language("କଖ கச", reg, p);
  EXPECT_EQ(t.predicted, LanguageId("odia"));
  EXPECT_TRUE(t.tie);
  std::reverse(p.tie_break_order.begin(), p.tie_break_order.end());
  EXPECT_EQ(identify_language("କଖ கச", reg, p).predicted, LanguageId("tamil"));
}

TEST(IdentifyLanguage, SharedCharsAndFallback) {
  const auto reg = indic();
  auto policy = LidPolicy::for_registry(reg);
  policy.fallback = LanguageId("odia");
  const auto digits = identify_language("12 12", reg, policy);
  EXPECT_TRUE(digits.used_fallback);
  EXPECT_EQ(digits.predicted, LanguageId("odia"));
  EXPECT_DOUBLE_EQ(digits.confidence, 0.0);
  EXPECT_TRUE(digits.votes.empty());

  policy.ignore_shared = false;
  const auto counted = identify_language("12 க", reg, policy);
  EXPECT_EQ(counted.predicted, LanguageId("tamil"));
  EXPECT_EQ(counted.votes.at(LanguageId("hindmara")), 2u);
  EXPECT_EQ(counted.votes.at(LanguageId("tamil")), 3u);

  const auto empty = identify_language("", reg, LidPolicy::for_registry(reg));
  EXPECT_TRUE(empty.used_fallback);
}

TEST(IdentifyLanguage, MinVotes) {
  const auto reg = indic();
  auto policy = LidPolicy::for_registry(reg);
  policy.min_votes = 3;
  policy.fallback = LanguageId("telugu");
  EXPECT_TRUE(identify_language("கச", reg, policy).used_fallback);
  EXPECT_EQ(identify_language("கசட", reg, policy).predicted, LanguageId("tamil"));
}

TEST(LidPolicy, ValidationAndJson) {
  const auto reg = indic();
  LidPolicy p = LidPolicy::for_registry(reg);
  EXPECT_NO_THROW(p.validate(reg));
  p.tie_break_order.pop_back();
  EXPECT_THROW(p.validate(reg), DataError);
  p = LidPolicy::for_registry(reg);
  p.fallback = LanguageId("klingon");
  EXPECT_THROW(p.validate(reg), DataError);
  p = LidPolicy::for_registry(reg);
  p.min_votes = 4;
  p.ignore_shared = false;
  const auto back = LidPolicy::from_json(p.to_json(), reg);
  EXPECT_EQ(back.min_votes, 4u);
  EXPECT_FALSE(back.ignore_shared);
  EXPECT_EQ(back.tie_break_order, p.tie_break_order);
  EXPECT_THROW(LidPolicy::from_json("{\"tie_break_order\":[\"odia\"]}", reg), DataError);
}

TEST(BatchIdentify, PerfectSeparabilityAndTsv) {
  const auto reg = indic();
  const Manifest m({utt("a", "கசட", "tamil"), utt("b", "నమ", "hindmara"), utt("c", "କଖ", "odia"), utt("d", "", "odia")});
  const auto r = batch_identify(m, reg, LidPolicy::for_registry(reg));
  ASSERT_TRUE(r.confusion);
  // "నమ" is Telugu script, not in any vocab: falls back to the first language.
  EXPECT_EQ(r.labels[1].result.predicted, LanguageId("hindmara"));
  EXPECT_TRUE(r.labels[1].result.used_fallback);
  EXPECT_TRUE(r.labels[3].result.used_fallback);
  EXPECT_EQ(r.confusion->total, 4u);
  EXPECT_EQ(r.confusion->correct, 3u);
  EXPECT_EQ(r.labeled.find("a")->language, LanguageId("tamil"));
  const std::string tsv = format_lid_tsv(r.labels);
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "a\ttamil\t1.0000\tfalse");
  const auto unlabeled = batch_identify(Manifest({utt("x", "கச")}), reg, LidPolicy::for_registry(reg));
  EXPECT_FALSE(unlabeled.confusion);
  EXPECT_EQ(unlabeled.labeled.find("x")->language, LanguageId("tamil"));
}

TEST(BatchIdentify, JobsDoNotChangeResults) {
  const Manifest m = generate_corpus({4, 50, 40, 3});
  const auto reg = testing::registry_from(m);
  const auto policy = LidPolicy::for_registry(reg);
  const auto one = batch_identify(m, reg, policy, 1);
  const auto many = batch_identify(m, reg, policy, 6);
  ASSERT_EQ(one.labels.size(), many.labels.size());
  for (std::size_t i = 0; i < one.labels.size(); ++i) ASSERT_EQ(one.labels[i].result, many.labels[i].result);
  EXPECT_EQ(one.confusion->to_json(), many.confusion->to_json());
}

TEST(BatchIdentify, CrossScriptNoiseAgainstBinomialBound) {
  // 20-char utterances, 10% of characters swapped to another script.
  const Manifest clean = generate_corpus({6, 200, 20, 42});
  const auto reg = testing::registry_from(clean);
  const Manifest noisy = testing::corrupt_cross_script(clean, reg, 0.10, 42);
  const auto r = batch_identify(noisy, reg, LidPolicy::for_registry(reg));
  // Misclassification needs at least half of the characters corrupted.
  const double bound = oracle::binomial_upper_tail(20, 0.10, 10);
  EXPECT_LT(bound, 1e-4);
  EXPECT_GE(r.confusion->accuracy(), 0.99);
  EXPECT_GE(r.confusion->accuracy(), 1.0 - 100 * bound);
}

std::u32string random_text(Rng& r, std::size_t n) {
  const std::u32string pool = U"नमकखகசటతକଖ12z ";
  std::u32string s;
  for (std::size_t i = 0; i < n; ++i) s += pool[r.below(pool.size())];
  return s;
}

TEST(LidProperty, PermutationInvariance) {
  const auto reg = indic();
  Rng r(31);
  std::mt19937_64 sh(2);
  for (bool ignore : {true, false}) {
    auto policy = LidPolicy::for_registry(reg);
    policy.ignore_shared = ignore;
    for (int trial = 0; trial < 500; ++trial) {
      std::u32string s = random_text(r, r.below(30));
      const auto base = identify_language(unicode::encode(s), reg, policy);
      std::shuffle(s.begin(), s.end(), sh);
      ASSERT_EQ(identify_language(unicode::encode(s), reg, policy), base);
    }
  }
}

TEST(LidProperty, AppendingWinnerVotesKeepsPrediction) {
  const auto reg = indic();
  const auto policy = LidPolicy::for_registry(reg);
  Rng r(37);
  for (int trial = 0; trial < 500; ++trial) {
    const std::u32string s = random_text(r, r.below(30));
    const auto base = identify_language(unicode::encode(s), reg, policy);
    const auto& winner = reg.at(base.predicted).chars;
    std::u32string own;
    for (char32_t c : winner) {
      if (reg.owners(c).size() == 1) own += c;
    }
    std::u32string extended = s;
    for (std::size_t k = 1 + r.below(5); k > 0; --k) extended += own[r.below(own.size())];
    ASSERT_EQ(identify_language(unicode::encode(extended), reg, policy).predicted, base.predicted);
  }
}

TEST(LidProperty, VoteConservationAndBounds) {
  const auto reg = indic();
  const auto policy = LidPolicy::for_registry(reg);
  Rng r(41);
  for (int trial = 0; trial < 500; ++trial) {
    const std::u32string s = random_text(r, r.below(40));
    const auto res = identify_language(unicode::encode(s), reg, policy);
    std::size_t unique_owned = 0;
    for (char32_t c : s) unique_owned += reg.owners(c).size() == 1;
    std::size_t sum = 0;
    for (const auto& [id, n] : res.votes) sum += n;
    ASSERT_EQ(sum, unique_owned);
    ASSERT_LE(sum, s.size());
    ASSERT_GE(res.confidence, 0.0);
    ASSERT_LE(res.confidence, 1.0);
    ASSERT_EQ(identify_language(unicode::encode(s), reg, policy), res);
  }
}

}  // namespace
}  // namespace mlasr
