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

#include <map>

#include "fixtures.hpp"
#include "mlasr/error.hpp"
#include "mlasr/rng.hpp"
#include "mlasr/textnorm.hpp"
#include "mlasr/unicode.hpp"
#include "mlasr/vocab.hpp"

namespace mlasr {
namespace {

using testing::utt;

// Independent counter: scalar tally over NFC text, skipping whitespace.
std::map<char32_t, std::uint64_t> brute_count(const std::vector<std::string>& texts) {
  std::map<char32_t, std::uint64_t> out;
  for (const auto& t : texts) {
    for (char32_t c : unicode::decode(unicode::nfc(t))) {
      if (c != U' ' && c != U'\t' && c != U'\n') ++out[c];
    }
  }
  return out;
}

TEST(CharFrequency, Examples) {
  const std::vector<std::string> ab = {"ab", "ba"};
  const auto f = char_frequency(ab);
  EXPECT_EQ(f.counts, (std::map<char32_t, std::uint64_t>{{U'a', 2}, {U'b', 2}}));
  EXPECT_EQ(f.total(), 4u);
  const std::vector<std::string> empty = {""};
  EXPECT_TRUE(char_frequency(empty).counts.empty());
  const std::vector<std::string> spaced = {"a a a"};
  EXPECT_EQ(char_frequency(spaced).counts, (std::map<char32_t, std::uint64_t>{{U'a', 3}}));
  EXPECT_EQ(f[U'z'], 0u);
}

TEST(CharFrequency, MergeIsCommutative) {
  CharFrequency a, b;
  a.add("नमस्ते");
  b.add("abc a");
  CharFrequency ab = a, ba = b;
  ab.merge(b);
  ba.merge(a);
  EXPECT_EQ(ab, ba);
  EXPECT_EQ(ab.total(), a.total() + b.total());
}

TEST(CharFrequency, MatchesBruteForce) {
  Rng r(17);
  const char32_t pool[] = {U'a', U'क', U'्', U'ष', U' ', U'\t', U'!'};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> texts;
    for (std::size_t k = r.below(8); k > 0; --k) {
      std::u32string s;
      for (std::size_t n = r.below(30); n > 0; --n) s += pool[r.below(std::size(pool))];
      texts.push_back(unicode::nfc(unicode::encode(s)));
    }
    ASSERT_EQ(char_frequency(texts).counts, brute_count(texts));
  }
}

TEST(CleanText, Examples) {
  CleaningRules bang;
  bang.removal_set = {U'!'};
  EXPECT_EQ(clean_text("नमस्ते!", bang), "नमस्ते");
  EXPECT_EQ(clean_text("a  b", CleaningRules{}), "a b");
  EXPECT_EQ(clean_text("", CleaningRules::defaults()), "");
  EXPECT_EQ(clean_text("  lead and trail  ", CleaningRules{}), "lead and trail");
}

TEST(CleanText, DefaultsKeepApostropheAndHyphen) {
  const auto d = CleaningRules::defaults();
  EXPECT_EQ(clean_text("don't re-enter, please.", d), "don't re-enter please");
  EXPECT_EQ(clean_text("«क»  ख।", d), "क ख");
  EXPECT_FALSE(d.removal_set.contains(U'\''));
  EXPECT_FALSE(d.removal_set.contains(U'-'));
  EXPECT_TRUE(d.removal_set.contains(U'।'));
}

TEST(CleanText, LowercaseLatinOnly) {
  CleaningRules r;
  r.lowercase_latin = true;
  EXPECT_EQ(clean_text("Train ट्रेन", r), "train ट्रेन");
}

TEST(CleanText, NoCollapseKeepsInnerRuns) {
  CleaningRules r;
  r.collapse_whitespace = false;
  r.removal_set = {U'!'};
  EXPECT_EQ(clean_text("a !  b", r), "a   b");
}

TEST(CleaningRules, JsonRoundTrip) {
  CleaningRules r;
  r.removal_set = {U'!', U'।', U'"'};
  r.lowercase_latin = true;
  EXPECT_EQ(CleaningRules::from_json(r.to_json()), r);
  EXPECT_THROW(CleaningRules::from_json("[1,2"), ParseError);
}

TEST(CleanTextProperty, IdempotentAndNoNewCharacters) {
  Rng r(23);
  const char32_t pool[] = {U'a', U'B', U'!', U'.', U'क', U'ि', U' ', U' ', U'\t', U'\'', U'\u2014', U'।'};
  const auto rules = CleaningRules::defaults();
  for (int trial = 0; trial < 500; ++trial) {
    std::u32string s;
    for (std::size_t n = r.below(25); n > 0; --n) s += pool[r.below(std::size(pool))];
    const std::string in = unicode::nfc(unicode::encode(s));
    const std::string once = clean_text(in, rules);
    ASSERT_EQ(clean_text(once, rules), once);
    const auto before = unicode::decode(in);
    for (char32_t c : unicode::decode(once)) {
      ASSERT_TRUE(c == U' ' || before.find(c) != std::u32string::npos);
    }
  }
}

TEST(RareSymbolFilter, RemovesRareSymbol) {
  std::vector<Utterance> es;
  for (int i = 0; i < 20; ++i) es.push_back(utt("u" + std::to_string(i), std::string(5, 'a')));
  es[0].text = "aa§ aa";
  es[1].text = "§aaaaa";
  es[2].text = "aa §";
  const auto r = rare_symbol_filter(Manifest(es), 10);
  EXPECT_EQ(r.removed, (std::map<char32_t, std::uint64_t>{{U'§', 3}}));
  for (const auto& u : r.manifest.entries()) EXPECT_EQ(u.text.find("§"), std::string::npos);
  EXPECT_EQ(r.manifest.find("u0")->text, "aa aa");
  EXPECT_EQ(r.manifest.find("u2")->text, "aa");
  EXPECT_EQ(format_removed_report(r.removed), "§\t3\n");
}

TEST(RareSymbolFilter, ThresholdZeroAndFixedPoint) {
  const Manifest m({utt("a", "x y"), utt("b", "z")});
  const auto zero = rare_symbol_filter(m, 0);
  EXPECT_EQ(zero.manifest, m);
  EXPECT_TRUE(zero.removed.empty());
  std::vector<Utterance> es;
  for (int i = 0; i < 10; ++i) es.push_back(utt("u" + std::to_string(i), "ab"));
  const Manifest dense(es);
  EXPECT_EQ(rare_symbol_filter(dense, 10).manifest, dense);
}

TEST(RareSymbolFilter, CountsOnlyTrainSplit) {
  std::vector<Utterance> es;
  for (int i = 0; i < 12; ++i) {
    Utterance u = utt("t" + std::to_string(i), i < 3 ? "ab" : "a");
    u.split = "train";
    es.push_back(u);
  }
  // Plenty of b outside train does not save it.
  for (int i = 0; i < 30; ++i) {
    Utterance u = utt("d" + std::to_string(i), "b");
    u.split = "test";
    es.push_back(u);
  }
  const auto r = rare_symbol_filter(Manifest(es), 10);
  EXPECT_TRUE(r.removed.contains(U'b'));
  EXPECT_EQ(r.manifest.find("d0")->text, "");
}

TEST(RareSymbolFilter, DeletionDoesNotSplitWords) {
  std::vector<Utterance> es;
  for (int i = 0; i < 10; ++i) es.push_back(utt("u" + std::to_string(i), "ab cd"));
  es.push_back(utt("x", "ab§cd"));
  EXPECT_EQ(rare_symbol_filter(Manifest(es), 10).manifest.find("x")->text, "abcd");
}

TEST(RareSymbolFilterProperty, FixedPointAndMinimumFrequency) {
  Rng r(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Utterance> es;
    const std::size_t alphabet = 3 + r.below(10);
    for (std::size_t i = 0, n = 5 + r.below(40); i < n; ++i) {
      std::u32string s;
      for (std::size_t k = r.below(15); k > 0; --k) {
        // Skewed draw so some symbols are rare.
        const auto a = r.below(alphabet);
        s += static_cast<char32_t>(U'a' + (r.below(3) == 0 ? a : a % 3));
        if (r.below(5) == 0) s += U' ';
      }
      es.push_back(utt("u" + std::to_string(i), unicode::encode(s)));
    }
    const std::uint64_t k = r.below(12);
    const auto once = rare_symbol_filter(Manifest(es), k);
    std::vector<std::string> texts;
    for (const auto& u : once.manifest.entries()) texts.push_back(u.text);
    for (const auto& [c, n] : brute_count(texts)) ASSERT_GE(n, k);
    const auto twice = rare_symbol_filter(once.manifest, k);
    ASSERT_EQ(twice.manifest, once.manifest);
    ASSERT_TRUE(twice.removed.empty());
  }
}

TEST(CleaningRules, RejectsRemovalOfVocabSymbols) {
  Vocab v;
  v.language = LanguageId("x");
  v.chars = {U'a', U'!'};
  v.freq.add("a!");
  const VocabRegistry reg(std::vector<Vocab>{v});
  CleaningRules r;
  r.removal_set = {U'!'};
  EXPECT_THROW(check_cleaning_rules(r, reg), DataError);
  r.removal_set = {U'?'};
  EXPECT_NO_THROW(check_cleaning_rules(r, reg));
}

}  // namespace
}  // namespace mlasr
